"""Exact integer and rational linear algebra.

Integer matrices are numpy object arrays holding Python ints, so nothing
overflows; rational matrices hold :class:`fractions.Fraction` entries.
Everything here is a pure function of its arguments.
"""
from __future__ import annotations

import heapq
from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterable, Optional, Sequence

import numpy as np


def as_int_matrix(m, ncols: Optional[int] = None) -> np.ndarray:
    """Coerce ``m`` to a 2-d object array of Python ints.

    Raises ``ValueError`` on ragged input or non-integral entries.
    """
    if isinstance(m, np.ndarray) and m.ndim == 2:
        rows = m.tolist()
    else:
        rows = [list(r) for r in m]
    if not rows:
        return np.zeros((0, ncols or 0), dtype=object)
    width = len(rows[0])
    out = np.empty((len(rows), width), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ValueError("ragged matrix")
        for j, x in enumerate(r):
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise ValueError(f"non-integral entry {x}")
                x = x.numerator
            elif isinstance(x, (float, np.floating)):
                if not float(x).is_integer():
                    raise ValueError(f"non-integral entry {x}")
                x = int(x)
            out[i, j] = int(x)
    return out


def as_rational_matrix(m) -> np.ndarray:
    rows = m.tolist() if isinstance(m, np.ndarray) else [list(r) for r in m]
    if not rows:
        return np.zeros((0, 0), dtype=object)
    width = len(rows[0])
    out = np.empty((len(rows), width), dtype=object)
    for i, r in enumerate(rows):
        if len(r) != width:
            raise ValueError("ragged matrix")
        for j, x in enumerate(r):
            out[i, j] = Fraction(x)
    return out


def identity(n: int) -> np.ndarray:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def int_det(m) -> int:
    """Exact determinant of a square integer matrix (Bareiss)."""
    a = [list(map(int, r)) for r in np.asarray(m, dtype=object).tolist()]
    n = len(a)
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


# --------------------------------------------------------------------------
# Smith normal form


@dataclass(frozen=True)
class SmithDecomposition:
    """``U @ m @ V == D`` with ``U``, ``V`` unimodular and ``D`` diagonal."""

    U: np.ndarray
    D: np.ndarray
    V: np.ndarray

    @property
    def diagonal(self) -> list[int]:
        k = min(self.D.shape)
        return [int(self.D[i, i]) for i in range(k)]

    @property
    def rank(self) -> int:
        return sum(1 for d in self.diagonal if d != 0)


def smith_normal_form(m) -> SmithDecomposition:
    """Smith normal form with transformation matrices.

    The pivot is always the nonzero entry of smallest absolute value in the
    active block, ties broken by (row, col), so the output is reproducible.
    Diagonal entries are nonnegative and form a divisibility chain.
    """
    D = as_int_matrix(m).copy()
    r, c = D.shape
    U, V = identity(r), identity(c)

    def swap_rows(i, j):
        if i != j:
            D[[i, j]] = D[[j, i]]
            U[[i, j]] = U[[j, i]]

    def swap_cols(i, j):
        if i != j:
            D[:, [i, j]] = D[:, [j, i]]
            V[:, [i, j]] = V[:, [j, i]]

    for t in range(min(r, c)):
        while True:
            best = None
            for i in range(t, r):
                for j in range(t, c):
                    x = D[i, j]
                    if x != 0 and (best is None or abs(x) < best[0]):
                        best = (abs(x), i, j)
            if best is None:
                return SmithDecomposition(U, D, V)
            _, pi, pj = best
            swap_rows(t, pi)
            swap_cols(t, pj)
            p = D[t, t]
            dirty = False
            for i in range(t + 1, r):
                if D[i, t] != 0:
                    q = D[i, t] // p
                    D[i] -= q * D[t]
                    U[i] -= q * U[t]
                    dirty |= D[i, t] != 0
            for j in range(t + 1, c):
                if D[t, j] != 0:
                    q = D[t, j] // p
                    D[:, j] -= q * D[:, t]
                    V[:, j] -= q * V[:, t]
                    dirty |= D[t, j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if D[i, j] % p != 0),
                None,
            )
            if bad is not None:
                D[t] += D[bad]
                U[t] += U[bad]
                continue
            break
        if D[t, t] < 0:
            D[t] = -D[t]
            U[t] = -U[t]
    return SmithDecomposition(U, D, V)


def hermite_normal_form(m) -> tuple[np.ndarray, np.ndarray]:
    """Row-style Hermite normal form: returns ``(H, U)`` with ``U @ m == H``.

    ``H`` is in row echelon form with positive pivots, entries above each
    pivot reduced into ``[0, pivot)``, and zero rows at the bottom. ``H`` is
    the canonical representative of the orbit of ``m`` under left
    multiplication by GL(r, Z).
    """
    H = as_int_matrix(m).copy()
    r, c = H.shape
    U = identity(r)
    row = 0
    for col in range(c):
        if row >= r:
            break
        nz = [i for i in range(row, r) if H[i, col] != 0]
        if not nz:
            continue
        # fold every entry of the column below `row` into H[row, col]
        for i in nz:
            if i == row:
                continue
            a, b = H[row, col], H[i, col]
            if b == 0:
                continue
            if a == 0:
                H[[row, i]] = H[[i, row]]
                U[[row, i]] = U[[i, row]]
                continue
            g, s, t = _xgcd(a, b)
            ra, rb = H[row].copy(), H[i].copy()
            ua, ub = U[row].copy(), U[i].copy()
            H[row] = s * ra + t * rb
            U[row] = s * ua + t * ub
            H[i] = (a // g) * rb - (b // g) * ra
            U[i] = (a // g) * ub - (b // g) * ua
        if H[row, col] < 0:
            H[row] = -H[row]
            U[row] = -U[row]
        p = H[row, col]
        for i in range(row):
            q = H[i, col] // p
            if q:
                H[i] -= q * H[row]
                U[i] -= q * U[row]
        row += 1
    return H, U


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return ``(g, s, t)`` with ``s*a + t*b == g == gcd(a, b) >= 0``."""
    s0, s1, t0, t1 = 1, 0, 0, 1
    x, y = a, b
    while y:
        q = x // y
        x, y = y, x - q * y
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if x < 0:
        x, s0, t0 = -x, -s0, -t0
    return x, s0, t0


def integer_kernel(m) -> np.ndarray:
    """Columns form a Z-basis of ``{v in Z^cols : m v = 0}``.

    Shape is ``(cols, k)``; ``k == 0`` when the kernel is trivial. The
    basis comes from the Smith transform, so the lattice it spans is
    saturated by construction.
    """
    m = as_int_matrix(m)
    snf = smith_normal_form(m)
    k = snf.rank
    K = snf.V[:, k:]
    if K.shape[1]:
        K, _ = hermite_normal_form(K.T)
        K = K.T
    return K


def is_unimodular_square(m) -> bool:
    m = as_int_matrix(m)
    return m.shape[0] == m.shape[1] and abs(int_det(m)) == 1


# --------------------------------------------------------------------------
# Rational linear algebra


def rref(m) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form over Q and the list of pivot columns."""
    R = as_rational_matrix(m).copy()
    r, c = R.shape
    pivots: list[int] = []
    row = 0
    for col in range(c):
        if row >= r:
            break
        piv = next((i for i in range(row, r) if R[i, col] != 0), None)
        if piv is None:
            continue
        R[[row, piv]] = R[[piv, row]]
        R[row] = R[row] / R[row, col]
        for i in range(r):
            if i != row and R[i, col] != 0:
                R[i] = R[i] - R[i, col] * R[row]
        pivots.append(col)
        row += 1
    return R, pivots


def rational_rank(m) -> int:
    """Rank over Q, computed exactly."""
    m = np.asarray(m, dtype=object) if not isinstance(m, np.ndarray) else m
    if m.size == 0:
        return 0
    return len(rref(m)[1])


def primitive(v: Iterable) -> tuple[int, ...]:
    """Scale a rational vector to a primitive integer vector (sign kept)."""
    v = [Fraction(x) for x in v]
    den = 1
    for x in v:
        den = den * x.denominator // gcd(den, x.denominator)
    ints = [int(x * den) for x in v]
    g = 0
    for x in ints:
        g = gcd(g, x)
    if g == 0:
        return tuple(ints)
    return tuple(x // g for x in ints)


def rational_nullspace(m) -> list[tuple[int, ...]]:
    """Basis of the rational kernel read off the RREF, cleared to primitive
    integer vectors. Deterministic in column order."""
    m = as_rational_matrix(m)
    if m.shape[0] == 0:
        c = m.shape[1]
        return [tuple(1 if j == i else 0 for j in range(c)) for i in range(c)]
    R, pivots = rref(m)
    c = R.shape[1]
    free = [j for j in range(c) if j not in pivots]
    basis = []
    for f in free:
        v = [Fraction(0)] * c
        v[f] = Fraction(1)
        for row, p in enumerate(pivots):
            v[p] = -R[row, f]
        basis.append(primitive(v))
    return basis


def same_rational_span(a: Sequence[Sequence], b: Sequence[Sequence]) -> bool:
    """True iff the row vectors of ``a`` and ``b`` span the same subspace."""
    a, b = [list(x) for x in a], [list(x) for x in b]
    if not a and not b:
        return True
    ra = rational_rank(as_rational_matrix(a)) if a else 0
    rb = rational_rank(as_rational_matrix(b)) if b else 0
    if ra != rb:
        return False
    return rational_rank(as_rational_matrix(a + b)) == ra


def sparse_rank(rows: Iterable[dict]) -> int:
    """Exact rank over Q of a sparse matrix given as ``{col: value}`` rows.

    Incremental elimination: pivot rows keep their leading column as the
    pivot and only carry larger columns, so reducing a new row never
    revisits a column.
    """
    pivots: dict[int, dict[int, Fraction]] = {}
    for raw in rows:
        row = {k: Fraction(v) for k, v in raw.items() if v != 0}
        heap = list(row)
        heapq.heapify(heap)
        lead = None
        while heap:
            col = heapq.heappop(heap)
            f = row.get(col)
            if f is None:
                continue
            prow = pivots.get(col)
            if prow is None:
                lead = col
                break
            for k, v in prow.items():
                nv = row.get(k, 0) - f * v
                if nv:
                    if k not in row:
                        heapq.heappush(heap, k)
                    row[k] = nv
                else:
                    row.pop(k, None)
        if lead is None:
            continue
        inv = 1 / row[lead]
        pivots[lead] = {k: v * inv for k, v in row.items()}
    return len(pivots)


# --------------------------------------------------------------------------
# Cone membership by exact phase-one simplex


@dataclass(frozen=True)
class RationalCone:
    """Nonnegative rational span of a finite set of generators."""

    generators: tuple[tuple[Fraction, ...], ...]
    dim: int

    @classmethod
    def from_generators(cls, generators: Iterable[Iterable], dim: Optional[int] = None):
        gens = tuple(tuple(Fraction(x) for x in g) for g in generators)
        if dim is None:
            if not gens:
                raise ValueError("dimension required for a cone with no generators")
            dim = len(gens[0])
        if any(len(g) != dim for g in gens):
            raise ValueError("generators of different dimensions")
        return cls(gens, dim)


@dataclass(frozen=True)
class ConeMembership:
    contains: bool
    witness: Optional[tuple[Fraction, ...]] = None
    # y with y.g <= 0 for every generator g and y.v > 0
    certificate: Optional[tuple[Fraction, ...]] = None

    def __bool__(self) -> bool:
        return self.contains


def _phase_one(G: list[list[Fraction]], b: list[Fraction]):
    """Solve ``G w = b, w >= 0`` by the phase-one simplex with Bland's rule.

    Returns ``(w, None)`` when feasible, ``(None, y)`` otherwise where ``y``
    is a Farkas certificate: ``y G <= 0`` and ``y b > 0``.
    """
    m = len(G)
    k = len(G[0]) if m else 0
    sign = [(-1 if bi < 0 else 1) for bi in b]
    ncol = k + m
    T = []
    for i in range(m):
        row = [sign[i] * G[i][j] for j in range(k)]
        row += [Fraction(1 if j == i else 0) for j in range(m)]
        row.append(sign[i] * b[i])
        T.append(row)
    basis = [k + i for i in range(m)]
    # reduced costs for minimising the sum of artificials
    z = [Fraction(0)] * (ncol + 1)
    for j in range(k):
        z[j] = -sum((T[i][j] for i in range(m)), Fraction(0))
    z[ncol] = -sum((T[i][ncol] for i in range(m)), Fraction(0))

    while True:
        enter = next((j for j in range(ncol) if z[j] < 0), None)
        if enter is None:
            break
        best = None
        for i in range(m):
            a = T[i][enter]
            if a > 0:
                ratio = T[i][ncol] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:  # cannot happen: phase one is bounded below by 0
            raise RuntimeError("unbounded phase-one problem")
        piv = best[1]
        pv = T[piv][enter]
        T[piv] = [x / pv for x in T[piv]]
        for i in range(m):
            if i != piv and T[i][enter] != 0:
                f = T[i][enter]
                T[i] = [x - f * y for x, y in zip(T[i], T[piv])]
        if z[enter] != 0:
            f = z[enter]
            z = [x - f * y for x, y in zip(z, T[piv])]
        basis[piv] = enter

    objective = -z[ncol]
    if objective == 0:
        w = [Fraction(0)] * k
        for i, bv in enumerate(basis):
            if bv < k:
                w[bv] = T[i][ncol]
        return w, None
    # dual values: y_i = c_B B^{-1} e_i, read from the artificial columns
    # of the reduced-cost row (c_j - y A_j with c_j = 1, A_j = e_i).
    y = [sign[i] * (1 - z[k + i]) for i in range(m)]
    return None, y


def cone_contains(cone: RationalCone, v: Sequence) -> ConeMembership:
    """Decide ``v in cone`` exactly, with a witness or a separating vector."""
    v = [Fraction(x) for x in v]
    if len(v) != cone.dim:
        raise ValueError(f"vector has dimension {len(v)}, cone lives in {cone.dim}")
    if not any(v):
        return ConeMembership(True, witness=tuple(Fraction(0) for _ in cone.generators))
    if not cone.generators:
        return ConeMembership(False, certificate=tuple(v))
    G = [[g[i] for g in cone.generators] for i in range(cone.dim)]
    w, y = _phase_one(G, v)
    if w is not None:
        assert all(
            sum((G[i][j] * w[j] for j in range(len(w))), Fraction(0)) == v[i]
            for i in range(cone.dim)
        )
        return ConeMembership(True, witness=tuple(w))
    assert all(sum(yi * gi for yi, gi in zip(y, g)) <= 0 for g in cone.generators)
    assert sum(yi * vi for yi, vi in zip(y, v)) > 0
    return ConeMembership(False, certificate=tuple(y))


def positive_functional(A) -> Optional[tuple[int, ...]]:
    """Integer ``y`` with every entry of ``y @ A`` at least 1, or ``None``.

    Such a ``y`` exists iff ``ker A`` meets the nonnegative orthant only in
    0 (Gordan's alternative); it bounds every coordinate of a nonnegative
    solution of ``A x = c`` by ``y.c / (y A)_j``.
    """
    A = as_int_matrix(A)
    r, c = A.shape
    # rewrite y A - s = 1 with the unknowns (y+, y-, s) as columns
    cols = []
    for i in range(r):
        cols.append([A[i, j] for j in range(c)])
    for i in range(r):
        cols.append([-A[i, j] for j in range(c)])
    for j in range(c):
        cols.append([-1 if jj == j else 0 for jj in range(c)])
    cone = RationalCone.from_generators(cols, dim=c)
    res = cone_contains(cone, [1] * c)
    if not res:
        return None
    w = res.witness
    y = [w[i] - w[r + i] for i in range(r)]
    den = 1
    for x in y:
        den = den * x.denominator // gcd(den, x.denominator)
    return tuple(int(x * den) for x in y)
