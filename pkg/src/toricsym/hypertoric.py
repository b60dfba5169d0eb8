"""Hypertoric data (A, theta, xi): moment maps, theta-semistability,
unimodularity, the wall structure in theta-space and a support-pattern
scan of the central fiber of Y(A, theta, 0) -> Y(A, 0, 0).

Coordinates on T*C^N are ``z`` (weights a_i) and ``w`` (weights -a_i).
Index sets are 0-based throughout.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from typing import Optional, Sequence

import numpy as np

from .exceptions import InputError, PreconditionError
from .fan import ExactSequenceData, SignedRayPairing
from .lattice import (
    RationalCone,
    as_int_matrix,
    cone_contains,
    int_det,
    integer_kernel,
    primitive,
    rational_nullspace,
    rational_rank,
    smith_normal_form,
)
from .tensors import GeneratorReport, generator_report


def _rationals(v, length: int, name: str) -> tuple[Fraction, ...]:
    try:
        out = tuple(Fraction(x) for x in v)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{name} must be a rational vector: {exc}") from None
    if len(out) != length:
        raise InputError(f"{name} must have length {length}, got {len(out)}")
    return out


@dataclass(frozen=True)
class HypertoricProblem:
    A: np.ndarray
    theta: tuple[Fraction, ...]
    xi: tuple[Fraction, ...]
    B: np.ndarray = field(repr=False, compare=False, default=None)

    def __init__(self, A, theta=None, xi=None):
        A = as_int_matrix(A)
        r, N = A.shape
        if r == 0 or r >= N:
            raise InputError("A must have 1 <= rows < columns")
        snf = smith_normal_form(A)
        if snf.rank != r or any(d != 1 for d in snf.diagonal):
            raise InputError("A must define a surjection Z^N -> Z^(N-n)")
        B = integer_kernel(A)
        if any(not any(B[i, :]) for i in range(N)):
            raise InputError("every row of the kernel matrix B must be nonzero")
        theta = _rationals(theta if theta is not None else [0] * r, r, "theta")
        xi = _rationals(xi if xi is not None else [0] * r, r, "xi")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "B", B)

    @property
    def n_coords(self) -> int:
        return self.A.shape[1]

    @property
    def rank(self) -> int:
        return self.A.shape[0]

    def columns(self) -> list[tuple[int, ...]]:
        return [tuple(int(x) for x in self.A[:, i]) for i in range(self.n_coords)]

    def exact_sequence(self) -> ExactSequenceData:
        return ExactSequenceData(self.B, self.A)

    def with_theta(self, theta) -> "HypertoricProblem":
        return HypertoricProblem(self.A, theta, self.xi)


@dataclass(frozen=True)
class PhasePoint:
    z: tuple[Fraction, ...]
    w: tuple[Fraction, ...]

    def __init__(self, z, w):
        z = tuple(Fraction(x) for x in z)
        w = tuple(Fraction(x) for x in w)
        if len(z) != len(w):
            raise InputError("z and w must have equal length")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)

    @property
    def support(self) -> "SupportPattern":
        return SupportPattern(
            frozenset(i for i, x in enumerate(self.z) if x),
            frozenset(i for i, x in enumerate(self.w) if x),
        )


@dataclass(frozen=True)
class SupportPattern:
    z_support: frozenset
    w_support: frozenset

    def __init__(self, z_support, w_support):
        object.__setattr__(self, "z_support", frozenset(z_support))
        object.__setattr__(self, "w_support", frozenset(w_support))

    def __len__(self) -> int:
        return len(self.z_support) + len(self.w_support)

    def __le__(self, other: "SupportPattern") -> bool:
        return self.z_support <= other.z_support and self.w_support <= other.w_support

    def __lt__(self, other: "SupportPattern") -> bool:
        return self <= other and self != other

    def mask(self, N: int) -> int:
        m = 0
        for i in self.z_support:
            m |= 1 << i
        for i in self.w_support:
            m |= 1 << (N + i)
        return m

    def to_dict(self) -> dict:
        return {"z_support": sorted(self.z_support), "w_support": sorted(self.w_support)}


def _check_point(h: HypertoricProblem, pt: PhasePoint) -> None:
    if len(pt.z) != h.n_coords:
        raise InputError(f"point has {len(pt.z)} coordinates, expected {h.n_coords}")


def moment_eval(h: HypertoricProblem, pt: PhasePoint) -> tuple[Fraction, ...]:
    """sum_i a_i z_i w_i."""
    _check_point(h, pt)
    out = [Fraction(0)] * h.rank
    for i, (a, b) in enumerate(zip(pt.z, pt.w)):
        if a and b:
            for j in range(h.rank):
                out[j] += int(h.A[j, i]) * a * b
    return tuple(out)


def torus_moment(weights: Sequence[int], x: Sequence, y: Sequence) -> Fraction:
    """One-dimensional torus acting on C^n with the given weights."""
    if not len(weights) == len(x) == len(y):
        raise InputError("weights, x and y must have equal length")
    return sum((int(a) * Fraction(p) * Fraction(q) for a, p, q in zip(weights, x, y)), Fraction(0))


def vector_group_moment(x: Sequence, y: Sequence) -> tuple[Fraction, ...]:
    """C^n acting on itself by translation: the moment map is (x, y) -> y."""
    if len(x) != len(y):
        raise InputError("x and y must have equal length")
    return tuple(Fraction(q) for q in y)


def act(h: HypertoricProblem, t: Sequence, pt: PhasePoint) -> PhasePoint:
    """t in (Q^*)^(N-n) acts by t^{a_i} on z_i and t^{-a_i} on w_i."""
    t = [Fraction(x) for x in t]
    if len(t) != h.rank or any(x == 0 for x in t):
        raise InputError("t must have nonzero entries, one per row of A")
    scale = []
    for i in range(h.n_coords):
        s = Fraction(1)
        for j in range(h.rank):
            s *= t[j] ** int(h.A[j, i])
        scale.append(s)
    return PhasePoint([s * x for s, x in zip(scale, pt.z)], [x / s for s, x in zip(scale, pt.w)])


# --------------------------------------------------------------------------
# stability


def pattern_weights(h: HypertoricProblem, pattern: SupportPattern) -> list[tuple[int, ...]]:
    cols = h.columns()
    gens = [cols[i] for i in sorted(pattern.z_support)]
    gens += [tuple(-x for x in cols[i]) for i in sorted(pattern.w_support)]
    return gens


def pattern_semistable(h: HypertoricProblem, pattern: SupportPattern, theta=None) -> bool:
    """theta in the cone spanned by a_i (z_i != 0) and -a_j (w_j != 0)."""
    theta = h.theta if theta is None else _rationals(theta, h.rank, "theta")
    cone = RationalCone.from_generators(pattern_weights(h, pattern), dim=h.rank)
    return cone_contains(cone, theta).contains


def pattern_stable(h: HypertoricProblem, pattern: SupportPattern, theta=None) -> bool:
    """theta in the interior of that cone (which then is full-dimensional).

    Interior points are exactly the combinations with all coefficients
    positive, so it suffices that t*theta - sum(g) lies in the cone for
    some t >= 0.
    """
    theta = h.theta if theta is None else _rationals(theta, h.rank, "theta")
    gens = pattern_weights(h, pattern)
    if not gens or rational_rank(np.array(gens, dtype=object)) < h.rank:
        return False
    if not pattern_semistable(h, pattern, theta):
        return False
    total = [-sum(g[k] for g in gens) for k in range(h.rank)]
    cone = RationalCone.from_generators(gens + [tuple(-x for x in theta)], dim=h.rank)
    return cone_contains(cone, total).contains


def is_semistable(h: HypertoricProblem, pt: PhasePoint) -> bool:
    _check_point(h, pt)
    return pattern_semistable(h, pt.support)


# --------------------------------------------------------------------------
# unimodularity and walls


def is_unimodular(A) -> bool:
    """Every maximal minor lies in {-1, 0, 1}."""
    A = as_int_matrix(A)
    r, c = A.shape
    if rational_rank(A) < r:
        raise PreconditionError("A must have full row rank")
    return all(abs(int_det(A[:, list(cols)])) <= 1 for cols in combinations(range(c), r))


@dataclass(frozen=True)
class Wall:
    """Hyperplane {normal . theta = 0} spanned by the listed columns."""

    normal: tuple[int, ...]
    columns: tuple[int, ...]

    def to_dict(self) -> dict:
        return {"normal": list(self.normal), "columns": list(self.columns)}


@dataclass(frozen=True)
class GenericityReport:
    generic: bool
    walls: tuple[Wall, ...]

    def __bool__(self) -> bool:
        return self.generic

    def to_dict(self) -> dict:
        return {"generic": self.generic, "walls": [w.to_dict() for w in self.walls]}


def walls(A) -> list[Wall]:
    """All hyperplanes spanned by N-n-1 columns of A, deduplicated."""
    A = as_int_matrix(A)
    r, N = A.shape
    cols = [tuple(int(x) for x in A[:, i]) for i in range(N)]
    found = {}
    for subset in combinations(range(N), r - 1):
        if r == 1:
            null = [(1,)]
        else:
            null = rational_nullspace([cols[i] for i in subset])
        if len(null) != 1:
            continue
        nrm = primitive(null[0])
        if next(x for x in nrm if x) < 0:
            nrm = tuple(-x for x in nrm)
        if nrm not in found:
            on = tuple(i for i in range(N) if sum(a * b for a, b in zip(nrm, cols[i])) == 0)
            found[nrm] = Wall(nrm, on)
    return sorted(found.values(), key=lambda w: (w.columns, w.normal))


def is_generic(h: HypertoricProblem) -> GenericityReport:
    """theta avoids every wall; the walls containing theta are returned."""
    hit = tuple(
        w for w in walls(h.A) if sum(a * b for a, b in zip(w.normal, h.theta)) == 0
    )
    return GenericityReport(not hit, hit)


# --------------------------------------------------------------------------
# central fiber


@dataclass(frozen=True)
class FiberComponent:
    pattern: SupportPattern
    dim: int
    stable: bool

    def to_dict(self) -> dict:
        d = self.pattern.to_dict()
        d.update(dim=self.dim, stable=self.stable)
        return d


@dataclass(frozen=True)
class HypertoricReport:
    unimodular: bool
    genericity: GenericityReport
    components: tuple[FiberComponent, ...]
    theta: tuple[Fraction, ...]

    def to_dict(self) -> dict:
        return {
            "theta": [str(x) for x in self.theta],
            "unimodular": self.unimodular,
            "generic": self.genericity.generic,
            "walls": [w.to_dict() for w in self.genericity.walls],
            "components": [c.to_dict() for c in self.components],
        }


def hypertoric_generators(h: HypertoricProblem, degree_bound: int = 2) -> GeneratorReport:
    """Generators of C[z, w]^T: class-0 monomials z^I' w^I, A(I' - I) = 0."""
    esd = h.exact_sequence()
    N = h.n_coords
    trivial = SignedRayPairing(tuple(range(N)), {})
    return generator_report(esd, trivial, degree_bound, "Rprime")


def _candidate_patterns(h: HypertoricProblem):
    """Patterns on which sum a_i z_i w_i vanishes identically: z_i and w_i
    are not both free unless a_i = 0. Largest first."""
    cols = h.columns()
    choices = []
    for i, a in enumerate(cols):
        opts = [(), ("z",), ("w",)]
        if not any(a):
            opts.append(("z", "w"))
        choices.append(opts)
    pats = []
    for pick in product(*choices):
        zs = [i for i, o in enumerate(pick) if "z" in o]
        ws = [i for i, o in enumerate(pick) if "w" in o]
        pats.append(SupportPattern(zs, ws))
    pats.sort(key=lambda p: (-len(p), sorted(p.z_support), sorted(p.w_support)))
    return pats


def moment_vanishes_on(h: HypertoricProblem, pattern: SupportPattern) -> bool:
    cols = h.columns()
    return all(not any(cols[i]) for i in pattern.z_support & pattern.w_support)


def generators_vanish_on(gens: GeneratorReport, pattern: SupportPattern, N: int) -> bool:
    m = pattern.mask(N)
    for g in gens.generators:
        gm = 0
        for i, e in enumerate(g.exponents):
            if e:
                gm |= 1 << i
        if gm & ~m == 0:
            return False
    return True


def central_fiber_components(
    h: HypertoricProblem, gens: Optional[GeneratorReport] = None
) -> list[FiberComponent]:
    """Maximal support patterns sigma with (a) the moment map identically
    zero on the coordinate subspace L_sigma, (b) every generator vanishing
    on L_sigma and (c) theta-semistability of the full support sigma.

    The quotient dimension is |sigma| - (N - n). ``stable`` records whether
    theta lies in the interior of the weight cone of sigma, i.e. whether the
    torus acts on the generic point of L_sigma with finite stabilisers.
    """
    if any(h.xi):
        raise PreconditionError("the central fiber is computed at xi = 0")
    if gens is None:
        gens = hypertoric_generators(h)
    N = h.n_coords
    accepted: list[SupportPattern] = []
    for pat in _candidate_patterns(h):
        if any(pat <= a for a in accepted):
            continue
        if not moment_vanishes_on(h, pat):
            continue
        if not generators_vanish_on(gens, pat, N):
            continue
        if not pattern_semistable(h, pat):
            continue
        accepted.append(pat)
    return [FiberComponent(p, len(p) - h.rank, pattern_stable(h, p)) for p in accepted]


def hypertoric_report(h: HypertoricProblem, degree_bound: int = 2) -> HypertoricReport:
    gens = hypertoric_generators(h, degree_bound)
    comps = central_fiber_components(h, gens) if not any(h.xi) else ()
    return HypertoricReport(is_unimodular(h.A), is_generic(h), tuple(comps), h.theta)


def blowup_weight_matrix(n: int) -> np.ndarray:
    """Weights of the T^2-action for P^n blown up at one fixed point:
    a_1 = ... = a_n = (1, -1), a_{n+1} = (1, 0), a_{n+2} = (0, 1)."""
    if n < 1:
        raise InputError("n must be positive")
    top = [1] * n + [1, 0]
    bottom = [-1] * n + [0, 1]
    return as_int_matrix([top, bottom])
