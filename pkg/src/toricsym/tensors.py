"""Torus-invariant monomials, graded dimensions and generators of the
algebra of symmetric tensors S(X) = sum_p H^0(X, S^p T_X).

A monomial S^I' T^I of a presentation is invariant exactly when its class
in Pic(X) vanishes; in the coordinates of ``R`` this reads
``I' - I - cI in ker(A)`` where ``cI`` moves each exponent of T_rho onto
the antipodal ray. Degree-p pieces are finite because a complete fan has
no nonzero nonnegative vector in ``ker(A)``.

Graded pieces are computed by exact linear algebra: every relation has
bidegree (0, 1), so the degree-p part of the ideal is spanned by the
products of relations with the class-0 monomials of degree p - 1.
"""
from __future__ import annotations

import logging
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, combinations_with_replacement
from math import ceil, log
from typing import Optional, Sequence, Union

import numpy as np

from .coxring import GradedPresentation, PresentationKind, cox_presentation
from .exceptions import InputError, PreconditionError
from .fan import (
    ExactSequenceData,
    Fan,
    SignedRayPairing,
    build_exact_sequence,
    select_sigma1,
)
from .lattice import (
    as_int_matrix,
    int_det,
    positive_functional,
    rational_nullspace,
    rational_rank,
    sparse_rank,
)

logger = logging.getLogger(__name__)


@dataclass(frozen=True, order=True)
class InvariantMonomial:
    """S^{I'} T^{I}: ``I_prime`` holds the S exponents, ``I`` the fiber
    exponents, both indexed by rays."""

    I_prime: tuple[int, ...]
    I: tuple[int, ...]

    @property
    def fiber_deg(self) -> int:
        return sum(self.I)

    @property
    def exponents(self) -> tuple[int, ...]:
        return self.I_prime + self.I

    def divides(self, other: "InvariantMonomial") -> bool:
        return all(a <= b for a, b in zip(self.exponents, other.exponents))

    def to_dict(self) -> dict:
        return {"I_prime": list(self.I_prime), "I": list(self.I), "fiber_degree": self.fiber_deg}

    @classmethod
    def from_exponents(cls, exps: Sequence[int]) -> "InvariantMonomial":
        n = len(exps) // 2
        return cls(tuple(exps[:n]), tuple(exps[n:]))


# --------------------------------------------------------------------------
# invariance predicates


def antipodal_transport(p: SignedRayPairing, I: Sequence[int]) -> tuple[int, ...]:
    """``cI``: entry rho is the exponent at -rho (0 when -rho is no ray)."""
    out = [0] * len(I)
    for rho, j in p.opposite.items():
        out[rho] = I[j]
    return tuple(out)


def kernel_criterion(A, p: Optional[SignedRayPairing], I_prime, I) -> bool:
    """``A (I' - I - cI) == 0``; pass ``p=None`` for T^rho coordinates,
    where no transport happens."""
    A = as_int_matrix(A)
    cI = antipodal_transport(p, I) if p is not None else (0,) * len(I)
    v = [a - b - c for a, b, c in zip(I_prime, I, cI)]
    return not any(A.dot(np.array(v, dtype=object)))


def weight_criterion(pres: GradedPresentation, exps: Sequence[int]) -> bool:
    """Class of the monomial is zero, read off the variable weights."""
    cls, _ = pres.bidegree(exps)
    return not any(cls)


# --------------------------------------------------------------------------
# enumeration


def _fiber_weights(esd: ExactSequenceData, p: SignedRayPairing, kind: PresentationKind):
    """Rays carrying a live fiber variable and the class each contributes
    to the S-part: a monomial is invariant iff A I' = sum_rho I_rho w_rho."""
    cols = esd.columns()
    r = esd.pic_rank
    if kind is PresentationKind.R:
        rays = p.sigma1
    else:
        rays = tuple(range(esd.n_rays))
    weights = {}
    for rho in rays:
        if kind in (PresentationKind.R, PresentationKind.Rtilde):
            j = p.partner(rho)
            other = cols[j] if j is not None else (0,) * r
            weights[rho] = tuple(a + b for a, b in zip(cols[rho], other))
        else:
            weights[rho] = cols[rho]
    return rays, weights


class _Solver:
    """All ``x >= 0`` with ``A x = c``, memoised per (column, residual).

    A positive functional ``y`` (``y A >= 1`` entrywise) caps coordinate j
    by ``y.c / (y A)_j``, which makes the search finite and exhaustive.
    """

    def __init__(self, esd: ExactSequenceData):
        y = positive_functional(esd.A)
        if y is None:
            raise PreconditionError(
                "ker(A) contains a nonzero nonnegative vector; graded pieces are infinite (fan not complete)"
            )
        self.y = y
        self.cols = esd.columns()
        self.g = [sum(yi * ai for yi, ai in zip(y, a)) for a in self.cols]
        self.memo: dict = {}
        self.lock = threading.Lock()

    def solve(self, c: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
        with self.lock:
            return self._rec(0, tuple(c))

    def _rec(self, j: int, res: tuple[int, ...]):
        key = (j, res)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        budget = sum(a * b for a, b in zip(self.y, res))
        out = []
        if budget >= 0:
            a, g = self.cols[j], self.g[j]
            if j == len(self.cols) - 1:
                if budget % g == 0:
                    k = budget // g
                    if all(r == k * x for r, x in zip(res, a)):
                        out.append((k,))
            else:
                for k in range(budget // g + 1):
                    nres = tuple(r - k * x for r, x in zip(res, a))
                    for tail in self._rec(j + 1, nres):
                        out.append((k,) + tail)
        out = tuple(out)
        self.memo[key] = out
        return out


class _Cache:
    """Shared per-fan memo; reads are lock-free, writes exclusive."""

    def __init__(self):
        self._data: dict = {}
        self._lock = threading.Lock()

    def get(self, key):
        return self._data.get(key)

    def put(self, key, value):
        with self._lock:
            return self._data.setdefault(key, value)

    def clear(self):
        with self._lock:
            self._data.clear()


_SOLVERS = _Cache()
_MONOMIALS = _Cache()


def _solver(esd: ExactSequenceData) -> _Solver:
    key = esd.key()
    s = _SOLVERS.get(key)
    if s is None:
        s = _SOLVERS.put(key, _Solver(esd))
    return s


def clear_caches() -> None:
    _SOLVERS.clear()
    _MONOMIALS.clear()


def invariant_monomials_of_degree(
    esd: ExactSequenceData,
    p: SignedRayPairing,
    deg: int,
    kind: Union[PresentationKind, str] = PresentationKind.R,
) -> list[InvariantMonomial]:
    """Every class-0 monomial of fiber degree ``deg``, sorted.

    ``kind`` selects the coordinates: ``R`` uses S_rho and T_rho for rho in
    Sigma_1 (T_{-rho} eliminated), ``Rtilde`` keeps every T_rho,
    ``Rprime``/``RtildePrime`` use S_rho and T^rho.
    """
    kind = PresentationKind.parse(kind)
    if deg < 0:
        raise InputError("degree must be nonnegative")
    key = (esd.key(), p.sigma1, kind, deg)
    hit = _MONOMIALS.get(key)
    if hit is not None:
        return list(hit)
    solver = _solver(esd)
    rays, weights = _fiber_weights(esd, p, kind)
    N, r = esd.n_rays, esd.pic_rank
    out = []
    for combo in combinations_with_replacement(rays, deg):
        I = [0] * N
        c = [0] * r
        for rho in combo:
            I[rho] += 1
            w = weights[rho]
            for k in range(r):
                c[k] += w[k]
        for Ip in solver.solve(tuple(c)):
            out.append(InvariantMonomial(Ip, tuple(I)))
    out.sort()
    return list(_MONOMIALS.put(key, tuple(out)))


# --------------------------------------------------------------------------
# graded dimensions


@dataclass(frozen=True)
class GradedDims:
    dims: tuple[int, ...]
    presentation_tag: str
    monomial_counts: tuple[int, ...] = ()
    relation_ranks: tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {
            "presentation": self.presentation_tag,
            "dims": list(self.dims),
            "monomial_counts": list(self.monomial_counts),
            "relation_ranks": list(self.relation_ranks),
        }


def _as_esd(f, esd):
    if esd is not None:
        return esd
    return build_exact_sequence(f)


def graded_piece(pres: GradedPresentation, esd: ExactSequenceData, p: SignedRayPairing, deg: int):
    """(number of class-0 monomials, rank of the ideal) in fiber degree ``deg``."""
    monos = invariant_monomials_of_degree(esd, p, deg, pres.kind)
    if deg == 0 or not pres.relations:
        return len(monos), 0
    index = {m.exponents: i for i, m in enumerate(monos)}
    rows = []
    for m in invariant_monomials_of_degree(esd, p, deg - 1, pres.kind):
        base = m.exponents
        for rel in pres.relations:
            row = {}
            for exps, c in rel.items():
                prod = tuple(a + b for a, b in zip(base, exps))
                row[index[prod]] = c
            rows.append(row)
    return len(monos), sparse_rank(rows)


def graded_dims(
    f: Optional[Fan],
    kind: Union[PresentationKind, str] = PresentationKind.R,
    p_max: int = 3,
    *,
    esd: Optional[ExactSequenceData] = None,
    pairing: Optional[SignedRayPairing] = None,
) -> GradedDims:
    """dim S(X)_p for p = 0..p_max computed in presentation ``R`` or ``Rprime``.

    ``esd`` may be passed to use a different basis of Pic(X); the fan is
    still needed to build the relations.
    """
    kind = PresentationKind.parse(kind)
    if kind not in (PresentationKind.R, PresentationKind.Rprime):
        raise InputError("graded dimensions are defined for the presentations R and Rprime")
    if p_max < 0:
        raise InputError("p_max must be nonnegative")
    esd = _as_esd(f, esd)
    pairing = pairing or select_sigma1(f)
    pres = cox_presentation(f, pairing, kind, esd=esd)
    dims, counts, ranks = [], [], []
    for deg in range(p_max + 1):
        n_mono, rk = graded_piece(pres, esd, pairing, deg)
        counts.append(n_mono)
        ranks.append(rk)
        dims.append(n_mono - rk)
        logger.debug("%s degree %d: %d monomials, ideal rank %d", kind.value, deg, n_mono, rk)
    return GradedDims(tuple(dims), kind.value, tuple(counts), tuple(ranks))


@dataclass(frozen=True)
class AgreementReport:
    agree: bool
    table: dict

    def to_dict(self) -> dict:
        return {"agree": self.agree, "dims": {k: list(v) for k, v in self.table.items()}}


def presentations_agree(f: Fan, p_max: int = 3) -> AgreementReport:
    """Compare the graded dimensions of the Cox-ring presentation and of
    the hypertoric presentation; they agree on every smooth complete fan."""
    esd = build_exact_sequence(f)
    pairing = select_sigma1(f)
    r = graded_dims(f, PresentationKind.R, p_max, esd=esd, pairing=pairing)
    rp = graded_dims(f, PresentationKind.Rprime, p_max, esd=esd, pairing=pairing)
    return AgreementReport(r.dims == rp.dims, {"R": r.dims, "Rprime": rp.dims})


# --------------------------------------------------------------------------
# generators


@dataclass(frozen=True)
class GeneratorReport:
    generators: tuple[InvariantMonomial, ...]
    degree_bound_used: int
    certified_complete: bool
    certificate_bound: int
    presentation_tag: str
    quotient_redundant: tuple[InvariantMonomial, ...] = ()
    unimodular: bool = False
    names: tuple[str, ...] = field(default=(), compare=False)

    def to_dict(self) -> dict:
        return {
            "presentation": self.presentation_tag,
            "degree_bound_used": self.degree_bound_used,
            "certificate_bound": self.certificate_bound,
            "certified_complete": self.certified_complete,
            "unimodular": self.unimodular,
            "generators": [g.to_dict() for g in self.generators],
            "quotient_redundant": [g.to_dict() for g in self.quotient_redundant],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "GeneratorReport":
        def mono(d):
            return InvariantMonomial(tuple(d["I_prime"]), tuple(d["I"]))

        return cls(
            generators=tuple(mono(d) for d in data["generators"]),
            degree_bound_used=data["degree_bound_used"],
            certified_complete=data["certified_complete"],
            certificate_bound=data["certificate_bound"],
            presentation_tag=data["presentation"],
            quotient_redundant=tuple(mono(d) for d in data["quotient_redundant"]),
            unimodular=data["unimodular"],
        )


def canonical_order(monos):
    """Fiber degree first, then exponents in decreasing lexicographic order."""
    return sorted(monos, key=lambda m: (m.fiber_deg, tuple(-e for e in m.exponents)))


def _semigroup_matrix(esd, p, kind):
    """Columns: S_rho with weight a_rho, then live fiber variables with
    weight -w_rho. Invariant monomials are its nonnegative kernel."""
    rays, weights = _fiber_weights(esd, p, kind)
    cols = esd.columns()
    M = [list(c) for c in cols] + [[-x for x in weights[rho]] for rho in rays]
    M = [[M[j][i] for j in range(len(M))] for i in range(esd.pic_rank)]
    return M, rays


def nonnegative_circuits(M) -> list[tuple[int, ...]]:
    """Primitive nonnegative vectors of minimal support in ``ker M``.

    These are exactly the extreme rays of ``ker M`` intersected with the
    orthant. Supports of size at most rank + 1 are scanned; supports whose
    columns are independent (nonzero Gram determinant, evaluated in floating
    point as a filter) or that contain a known circuit are skipped before
    the exact nullspace is taken.
    """
    M = [list(r) for r in M]
    ncols = len(M[0]) if M else 0
    if not M:
        return []
    rk = rational_rank(np.array(M, dtype=object))
    Mf = np.array(M, dtype=float)
    found = []
    masks: list[int] = []
    for size in range(1, rk + 2):
        supports = list(combinations(range(ncols), size))
        if not supports:
            continue
        idx = np.array(supports)
        sub = Mf[:, idx].transpose(1, 0, 2)  # (batch, rows, size)
        gram = np.einsum("bri,brj->bij", sub, sub)
        independent = np.abs(np.linalg.det(gram)) > 0.5
        for support, indep in zip(supports, independent):
            if indep:
                continue
            mask = sum(1 << j for j in support)
            if any(m & mask == m for m in masks):
                continue
            null = rational_nullspace([[row[j] for j in support] for row in M])
            if len(null) != 1:
                continue
            (v,) = null
            if any(x == 0 for x in v):
                continue
            if all(x < 0 for x in v):
                v = tuple(-x for x in v)
            elif not all(x > 0 for x in v):
                continue
            full = [0] * ncols
            for j, x in zip(support, v):
                full[j] = x
            found.append(tuple(full))
            masks.append(mask)
    return found


def maximal_minors_unimodular(M) -> bool:
    M = as_int_matrix(M)
    r, c = M.shape
    for cols in combinations(range(c), r):
        if abs(int_det(M[:, list(cols)])) > 1:
            return False
    return True


def hilbert_degree_bound(esd: ExactSequenceData, p: SignedRayPairing, kind) -> tuple[int, bool]:
    """A fiber degree that every minimal generator provably respects.

    If the weight matrix has all maximal minors in {0, +-1}, integer kernel
    vectors decompose conformally into circuits, so the generators are the
    extreme rays and the bound is their largest fiber degree. Otherwise a
    generator lies in the half-open parallelepiped of at most ``dim``
    extreme rays, giving ``dim * max_degree - 1``.
    """
    kind = PresentationKind.parse(kind)
    M, rays = _semigroup_matrix(esd, p, kind)
    N = esd.n_rays
    circuits = nonnegative_circuits(M)
    degs = [sum(c[N:]) for c in circuits]
    top = max(degs) if degs else 0
    if maximal_minors_unimodular(M):
        return top, True
    dim = len(M[0]) - rational_rank(np.array(M, dtype=object))
    return max(top, dim * top - 1), False


def _quotient_redundant(pres: GradedPresentation, gens: Sequence[InvariantMonomial]):
    """Degree-1 generators that lie in the span of earlier ones modulo the
    degree-1 relations, scanning in canonical order."""
    deg1 = [g for g in canonical_order(gens) if g.fiber_deg == 1]
    cols: dict = {}

    def vec(poly):
        return {cols.setdefault(e, len(cols)): c for e, c in poly.items()}

    rows = [vec(r) for r in pres.relations]
    rank = sparse_rank(rows)
    flagged = []
    for g in deg1:
        trial = rows + [vec({g.exponents: 1})]
        rk = sparse_rank(trial)
        if rk > rank:
            rows, rank = trial, rk
        else:
            flagged.append(g)
    return tuple(flagged)


def generator_report(
    esd: ExactSequenceData,
    p: SignedRayPairing,
    degree_bound: int,
    kind: Union[PresentationKind, str] = PresentationKind.Rprime,
    f: Optional[Fan] = None,
) -> GeneratorReport:
    """Minimal generators of the invariant-monomial semigroup up to
    ``degree_bound``: degree by degree, keep each invariant monomial not
    divisible by an earlier generator.

    With ``f`` given, degree-1 generators that are dependent modulo the
    relations of the presentation are listed in ``quotient_redundant``.
    """
    kind = PresentationKind.parse(kind)
    if degree_bound < 1:
        raise InputError("degree_bound must be at least 1")
    gens: list[InvariantMonomial] = []
    for d in range(1, degree_bound + 1):
        fresh = [m for m in invariant_monomials_of_degree(esd, p, d, kind) if not any(g.divides(m) for g in gens)]
        gens.extend(fresh)
    gens = canonical_order(gens)
    bound, unimodular = hilbert_degree_bound(esd, p, kind)
    redundant = ()
    if f is not None:
        redundant = _quotient_redundant(cox_presentation(f, p, kind, esd=esd), gens)
    return GeneratorReport(
        tuple(gens),
        degree_bound,
        bound <= degree_bound,
        bound,
        kind.value,
        redundant,
        unimodular,
    )


# --------------------------------------------------------------------------
# growth


@dataclass(frozen=True)
class GrowthReport:
    exponent: float
    expected: int
    dims: tuple[int, ...]
    fit_range: tuple[int, int]

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "expected": self.expected,
            "dims": list(self.dims),
            "fit_range": list(self.fit_range),
        }


def bigness_growth_report(f: Fan, p_max: int, kind="Rprime") -> GrowthReport:
    """Slope of log dim S(X)_p against log p over [p_max/2, p_max].

    For a big tangent bundle the slope tends to 2n - 1; convergence is slow
    so this is a diagnostic only.
    """
    if p_max < 4:
        raise InputError("p_max must be at least 4 for a growth fit")
    dims = graded_dims(f, kind, p_max).dims
    lo = max(1, ceil(p_max / 2))
    ps = [q for q in range(lo, p_max + 1) if dims[q] > 0]
    if len(ps) < 2:
        slope = 0.0
    else:
        slope = float(np.polyfit([log(q) for q in ps], [log(dims[q]) for q in ps], 1)[0])
    return GrowthReport(slope, 2 * f.dim - 1, dims, (lo, p_max))
