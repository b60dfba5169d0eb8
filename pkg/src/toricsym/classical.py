"""Matrix models of Z_X for projective space and its blow-ups at toric
fixed points: the Springer map, the comparison map nu and the
determinantal description.

Conventions for ``blowup_projective_space(n, k)``: rays v_1..v_{n+1} of
P^n, followed by -v_a for each blown-up index a = k+1..n+1. Coordinates of
T*C^N are ``x`` (one per ray) and ``y`` (dual). On Phi^{-1}(0) one has
``x_rho y_rho = <v_rho, m>`` for some m, hence ``x'_a y'_a = -x_a y_a`` for
each exceptional pair.
"""
from __future__ import annotations

import random
from fractions import Fraction
from itertools import combinations
from typing import Optional, Sequence

import numpy as np

from .exceptions import InputError, PreconditionError


def _as_fraction_matrix(z, n: int) -> np.ndarray:
    z = np.array(z, dtype=object)
    if z.shape != (n + 1, n + 1):
        raise InputError(f"expected a {(n + 1)}x{(n + 1)} matrix, got shape {z.shape}")
    return np.vectorize(Fraction, otypes=[object])(z)


def _as_fraction_vector(v, length: int, name: str) -> list[Fraction]:
    v = [Fraction(x) for x in v]
    if len(v) != length:
        raise InputError(f"{name} must have length {length}")
    return v


def trace(z: np.ndarray):
    return sum(z[i, i] for i in range(z.shape[0]))


def rank_at_most_one(z: np.ndarray) -> bool:
    """All 2x2 minors vanish."""
    r, c = z.shape
    for i, j in combinations(range(r), 2):
        for k, l in combinations(range(c), 2):
            if z[i, k] * z[j, l] - z[i, l] * z[j, k] != 0:
                return False
    return True


def springer_eval_pn(n: int, x: Sequence, y: Sequence) -> np.ndarray:
    """(x, y) -> (x_i y_j) on the hypersurface sum x_i y_i = 0."""
    x = _as_fraction_vector(x, n + 1, "x")
    y = _as_fraction_vector(y, n + 1, "y")
    if sum(a * b for a, b in zip(x, y)) != 0:
        raise PreconditionError("point is not on the hypersurface sum x_i y_i = 0")
    return np.array([[a * b for b in y] for a in x], dtype=object)


def nu_eval_blowup(n: int, z) -> np.ndarray:
    """nu: O_min -> Z_{Bl P^n}; scales z_{i,n+1} (i <= n) by -z_{n+1,n+1}."""
    z = _as_fraction_matrix(z, n)
    if trace(z) != 0 or not rank_at_most_one(z):
        raise PreconditionError("nu is defined on traceless matrices of rank at most 1")
    out = z.copy()
    corner = z[n, n]
    for i in range(n):
        out[i, n] = -corner * z[i, n]
    return out


def modified_matrix(n: int, k: int, z) -> np.ndarray:
    """Replace z_jj by -z_jj^2 for the blown-up indices j > k (1-based)."""
    z = _as_fraction_matrix(z, n)
    m = z.copy()
    for j in range(k, n + 1):
        m[j, j] = -z[j, j] ** 2
    return m


def determinantal_membership(n: int, k: int, z) -> bool:
    """Membership in the determinantal model of Z_X for P^n blown up at the
    n+1-k fixed points opposite v_{k+1}..v_{n+1}: trace zero and the
    modified matrix has rank at most 1."""
    if not 1 <= k <= n + 1:
        raise InputError("k must satisfy 1 <= k <= n+1")
    z = _as_fraction_matrix(z, n)
    return trace(z) == 0 and rank_at_most_one(modified_matrix(n, k, z))


def determinantal_monomials(n: int, k: int) -> np.ndarray:
    """Exponent vectors (x-part then y-part, length 2N) of the invariant
    monomials z_ab.

    Put ``X_a = x_a y'_a`` and ``Y_b = y_b x'_b`` when a (resp. b) is
    blown up, ``X_a = x_a`` and ``Y_b = y_b`` otherwise. Then
    z_ab = X_a Y_b for a != b and z_aa = x_a y_a. For k = n this is the
    blow-up map with z_{i,n+1} = x_i y_{n+1} x_{n+2} and
    z_{n+1,j} = x_{n+1} y_{n+2} y_j.
    """
    if not 1 <= k <= n + 1:
        raise InputError("k must satisfy 1 <= k <= n+1")
    N = n + 1 + (n + 1 - k)
    prime = {a: n + 1 + e for e, a in enumerate(range(k, n + 1))}
    out = np.empty((n + 1, n + 1), dtype=object)
    for a in range(n + 1):
        for b in range(n + 1):
            e = [0] * (2 * N)
            e[a] += 1
            e[N + b] += 1
            if a != b:
                if a in prime:
                    e[N + prime[a]] += 1
                if b in prime:
                    e[prime[b]] += 1
            else:
                e[N + a] = 1
                e[a] = 1
            out[a, b] = tuple(e)
    return out


def determinantal_coordinates(n: int, k: int, x: Sequence, y: Sequence) -> np.ndarray:
    """Evaluate the monomials of ``determinantal_monomials`` at (x, y)."""
    monos = determinantal_monomials(n, k)
    N = n + 1 + (n + 1 - k)
    coords = _as_fraction_vector(x, N, "x") + _as_fraction_vector(y, N, "y")
    z = np.empty((n + 1, n + 1), dtype=object)
    for a in range(n + 1):
        for b in range(n + 1):
            v = Fraction(1)
            for c, e in zip(coords, monos[a, b]):
                if e:
                    v *= c**e
            z[a, b] = v
    return z


def sample_zero_fiber(rays: Sequence[Sequence[int]], rng: Optional[random.Random] = None, height: int = 5):
    """Random rational point of Phi^{-1}(0): choose m, then x_rho y_rho = <v_rho, m>.

    About a quarter of the samples are taken with m = 0 and random zero
    patterns, so that boundary strata are hit too.
    """
    rng = rng or random.Random()
    dim = len(rays[0])

    def q():
        return Fraction(rng.randint(-height, height), rng.randint(1, height))

    m = [q() for _ in range(dim)]
    x, y = [], []
    for v in rays:
        target = sum(a * b for a, b in zip(v, m))
        if target == 0 and rng.random() < 0.5:
            xi, yi = (q(), Fraction(0)) if rng.random() < 0.5 else (Fraction(0), q())
        else:
            xi = q() or Fraction(1)
            yi = target / xi
        x.append(xi)
        y.append(yi)
    if rng.random() < 0.25:
        m = [Fraction(0)] * dim
        i = rng.randrange(len(rays))
        x = [Fraction(0) if j != i and rng.random() < 0.5 else xj for j, xj in enumerate(x)]
        y = [Fraction(0) if x[j] != 0 else q() for j in range(len(rays))]
    return x, y


def springer_preimage(n: int, x: Sequence, y: Sequence):
    """For a point (x, y) of Phi^{-1}(0) on the one-point blow-up with
    y_{n+2} != 0, return (u, v) on the hypersurface of P^n with
    nu(springer(u, v)) equal to the blow-up coordinates of (x, y)."""
    x = _as_fraction_vector(x, n + 2, "x")
    y = _as_fraction_vector(y, n + 2, "y")
    if y[n + 1] == 0:
        raise PreconditionError("requires y_{n+2} != 0")
    u = x[:n] + [x[n] * y[n + 1]]
    v = y[:n] + [y[n] / y[n + 1]]
    return u, v
