"""Smooth complete fans and the exact sequence ``0 -> M -> Z^N -> Pic -> 0``.

A fan is stored as primitive ray generators plus maximal cones (index
tuples into the ray list). The ray order fixes the variable order of every
ring built downstream.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd
from typing import Mapping, Optional

import numpy as np

from .exceptions import InputError, PreconditionError
from .lattice import (
    RationalCone,
    as_int_matrix,
    cone_contains,
    hermite_normal_form,
    int_det,
    rational_nullspace,
    same_rational_span,
    smith_normal_form,
)


@dataclass(frozen=True)
class Fan:
    dim: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if not isinstance(self.dim, int) or self.dim < 1:
            raise InputError(f"fan dimension must be a positive integer, got {self.dim!r}")
        rays = tuple(tuple(int(x) for x in r) for r in self.rays)
        for r in rays:
            if len(r) != self.dim:
                raise InputError(f"ray {list(r)} does not have {self.dim} coordinates")
        cones = []
        for c in self.max_cones:
            c = tuple(int(i) for i in c)
            if not c:
                raise InputError("empty maximal cone")
            if len(set(c)) != len(c):
                raise InputError(f"repeated ray index in cone {list(c)}")
            if any(i < 0 or i >= len(rays) for i in c):
                raise InputError(f"cone {list(c)} refers to a missing ray")
            cones.append(tuple(sorted(c)))
        object.__setattr__(self, "rays", rays)
        object.__setattr__(self, "max_cones", tuple(cones))

    @property
    def n_rays(self) -> int:
        return len(self.rays)

    @classmethod
    def from_dict(cls, data: Mapping, name: str = "") -> "Fan":
        try:
            return cls(
                dim=data["dim"],
                rays=tuple(tuple(r) for r in data["rays"]),
                max_cones=tuple(tuple(c) for c in data["max_cones"]),
                name=name or data.get("name", ""),
            )
        except (KeyError, TypeError) as exc:
            raise InputError(f"fan data does not match the schema: {exc}") from exc

    @classmethod
    def from_json(cls, text: str, name: str = "") -> "Fan":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"invalid JSON: {exc}") from exc
        if not isinstance(data, dict):
            raise InputError("fan JSON must be an object")
        return cls.from_dict(data, name=name)

    def to_dict(self) -> dict:
        return {
            "dim": self.dim,
            "rays": [list(r) for r in self.rays],
            "max_cones": [list(c) for c in self.max_cones],
        }

    def opposite(self, i: int) -> Optional[int]:
        neg = tuple(-x for x in self.rays[i])
        for j, r in enumerate(self.rays):
            if r == neg:
                return j
        return None

    def permuted(self, order) -> "Fan":
        """Same fan with rays listed in ``order`` (new i = old order[i])."""
        inv = {old: new for new, old in enumerate(order)}
        return Fan(
            self.dim,
            tuple(self.rays[o] for o in order),
            tuple(tuple(inv[i] for i in c) for c in self.max_cones),
            name=self.name,
        )


# --------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class FanValidationReport:
    checks: dict
    messages: dict

    @property
    def passed(self) -> bool:
        return all(self.checks.values())

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "checks": dict(self.checks),
            "messages": {k: v for k, v in self.messages.items() if v},
        }


def _facet_normal(rays) -> tuple[int, ...]:
    (normal,) = rational_nullspace(rays)
    return normal


def validate_fan(f: Fan) -> FanValidationReport:
    """Check primitivity, smoothness, completeness and positive spanning.

    Completeness is certified combinatorially: every facet of a maximal cone
    lies in exactly two maximal cones, on opposite sides of its hyperplane.
    For a pure simplicial fan this is equivalent to full support.
    """
    checks, msgs = {}, {}
    n = f.dim

    bad = [i for i, r in enumerate(f.rays) if not any(r)]
    checks["nonzero"] = not bad
    msgs["nonzero"] = f"zero rays: {bad}" if bad else ""

    bad = []
    for i, r in enumerate(f.rays):
        g = 0
        for x in r:
            g = gcd(g, x)
        if g != 1:
            bad.append(i)
    checks["primitive"] = not bad
    msgs["primitive"] = f"non-primitive rays: {bad}" if bad else ""

    dup = len(set(f.rays)) != len(f.rays)
    checks["distinct"] = not dup
    msgs["distinct"] = "repeated ray generators" if dup else ""

    bad = []
    for c in f.max_cones:
        if len(c) != n or abs(int_det([f.rays[i] for i in c])) != 1:
            bad.append(list(c))
    checks["smooth"] = not bad and bool(f.max_cones)
    msgs["smooth"] = f"cones that are not unimodular of size {n}: {bad}" if bad else ""

    checks["complete"], msgs["complete"] = _facet_pairing(f)

    missing = []
    cone = RationalCone.from_generators(f.rays, dim=n) if f.rays else None
    for i in range(n):
        for s in (1, -1):
            e = [0] * n
            e[i] = s
            if cone is None or not cone_contains(cone, e):
                missing.append(e)
    checks["positive_span"] = not missing
    msgs["positive_span"] = f"not in the positive span: {missing}" if missing else ""
    return FanValidationReport(checks, msgs)


def _facet_pairing(f: Fan) -> tuple[bool, str]:
    n = f.dim
    if any(len(c) != n for c in f.max_cones) or not f.max_cones:
        return False, "fan is not pure of full dimension"
    owners: dict = {}
    for ci, c in enumerate(f.max_cones):
        for drop in c:
            facet = tuple(i for i in c if i != drop)
            owners.setdefault(facet, []).append((ci, drop))
    for facet, own in owners.items():
        if len(own) != 2:
            return False, f"facet {list(facet)} lies in {len(own)} maximal cone(s)"
        if n == 1:
            sides = [f.rays[d][0] for _, d in own]
        else:
            normal = _facet_normal([f.rays[i] for i in facet])
            sides = [sum(a * b for a, b in zip(normal, f.rays[d])) for _, d in own]
        if sides[0] * sides[1] >= 0:
            return False, f"cones on facet {list(facet)} overlap"
    return True, ""


# --------------------------------------------------------------------------
# exact sequence


@dataclass(frozen=True)
class ExactSequenceData:
    """``B`` (N x n) maps m to (<v_rho, m>)_rho; ``A`` ((N-n) x N) is the
    projection onto Pic(X) = Z^(N-n). Column rho of ``A`` is the class of
    the toric divisor D_rho."""

    B: np.ndarray
    A: np.ndarray

    @property
    def pic_rank(self) -> int:
        return self.A.shape[0]

    @property
    def n_rays(self) -> int:
        return self.A.shape[1]

    def column(self, rho: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.A[:, rho])

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.n_rays)]

    def with_basis(self, G) -> "ExactSequenceData":
        """Same sequence with Pic(X) re-coordinatised by unimodular ``G``."""
        G = as_int_matrix(G)
        if G.shape != (self.pic_rank, self.pic_rank) or abs(int_det(G)) != 1:
            raise InputError("basis change must be a unimodular square matrix")
        return ExactSequenceData(self.B, G.dot(self.A))

    def key(self) -> tuple:
        return (tuple(map(tuple, self.A.tolist())), tuple(map(tuple, self.B.tolist())))


def check_exactness(esd: ExactSequenceData) -> dict:
    A, B = esd.A, esd.B
    return {
        "AB_zero": not np.any(A.dot(B)),
        "A_surjective": all(d == 1 for d in smith_normal_form(A).diagonal),
        "B_saturated_injective": all(d == 1 for d in smith_normal_form(B).diagonal)
        and smith_normal_form(B).rank == B.shape[1],
        "ranks_add_up": A.shape[0] + B.shape[1] == B.shape[0],
    }


def build_exact_sequence(f: Fan, validate: bool = True) -> ExactSequenceData:
    """Cokernel projection of ``B`` via its Smith form, put in Hermite form.

    The Hermite form fixes the otherwise arbitrary basis of Pic(X), so the
    result depends only on the ray order.
    """
    if validate:
        report = validate_fan(f)
        if not report.passed:
            failed = [k for k, v in report.checks.items() if not v]
            raise PreconditionError(f"fan fails validation: {', '.join(failed)}")
    B = as_int_matrix(f.rays)
    N, n = B.shape
    snf = smith_normal_form(B)
    A, _ = hermite_normal_form(snf.U[n:, :]) if N > n else (snf.U[n:, :], None)
    esd = ExactSequenceData(B, A)
    bad = [k for k, v in check_exactness(esd).items() if not v]
    if bad:
        raise PreconditionError(f"sequence is not exact: {', '.join(bad)}")
    return esd


# --------------------------------------------------------------------------
# antipodal rays and the perpendicular spaces


@dataclass(frozen=True)
class SignedRayPairing:
    """``sigma1`` keeps every unpaired ray and the smaller index of each
    antipodal pair; ``opposite`` maps each paired ray to its partner."""

    sigma1: tuple[int, ...]
    opposite: Mapping[int, int]

    @property
    def pairs(self) -> list[tuple[int, int]]:
        """(kept, dropped) for every antipodal pair."""
        return sorted((r, self.opposite[r]) for r in self.sigma1 if r in self.opposite)

    @property
    def dropped(self) -> tuple[int, ...]:
        return tuple(d for _, d in self.pairs)

    def partner(self, rho: int) -> Optional[int]:
        return self.opposite.get(rho)


def select_sigma1(f: Fan) -> SignedRayPairing:
    opposite = {}
    for i in range(f.n_rays):
        j = f.opposite(i)
        if j is not None:
            opposite[i] = j
    sigma1 = tuple(i for i in range(f.n_rays) if i not in opposite or opposite[i] > i)
    return SignedRayPairing(sigma1, dict(sorted(opposite.items())))


@dataclass(frozen=True)
class PerpSpaces:
    """Relations among ray generators.

    ``sigma1_perp`` lives in Q^{Sigma_1} (coordinates ordered as
    ``pairing.sigma1``); ``sigma1_perp_embedded`` pads it with zeros to Q^N;
    ``sigma_perp`` is a basis of all relations (the rows of ``A``);
    ``pair_vectors[rho]`` has a 1 at rho and at -rho, for dropped rho.
    """

    sigma1_perp: tuple[tuple[int, ...], ...]
    sigma1_perp_embedded: tuple[tuple[int, ...], ...]
    sigma_perp: tuple[tuple[int, ...], ...]
    pair_vectors: Mapping[int, tuple[int, ...]]


def perp_spaces(f: Fan, p: SignedRayPairing, esd: Optional[ExactSequenceData] = None) -> PerpSpaces:
    esd = esd or build_exact_sequence(f)
    N = f.n_rays
    cols = [[f.rays[r][i] for r in p.sigma1] for i in range(f.dim)]
    s1 = tuple(rational_nullspace(cols))
    embedded = []
    for u in s1:
        v = [0] * N
        for pos, r in zip(u, p.sigma1):
            v[r] = pos
        embedded.append(tuple(v))
    sigma_perp = tuple(tuple(int(x) for x in row) for row in esd.A.tolist())
    full = rational_nullspace([[f.rays[r][i] for r in range(N)] for i in range(f.dim)])
    if not same_rational_span(sigma_perp, full):
        raise PreconditionError("rows of A do not span the relations among rays")
    pair_vectors = {}
    for kept, dropped in p.pairs:
        v = [0] * N
        v[kept] = v[dropped] = 1
        pair_vectors[dropped] = tuple(v)
    return PerpSpaces(s1, tuple(embedded), sigma_perp, pair_vectors)


# --------------------------------------------------------------------------
# standard fans


def projective_space(n: int) -> Fan:
    """Rays e_1..e_n and -(e_1+...+e_n)."""
    rays = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
    rays.append(tuple(-1 for _ in range(n)))
    cones = [tuple(j for j in range(n + 1) if j != i) for i in range(n + 1)]
    return Fan(n, tuple(rays), tuple(cones), name=f"P{n}")


def blowup_projective_space(n: int, k: Optional[int] = None) -> Fan:
    """P^n blown up at the torus-fixed points opposite v_{k+1}, ..., v_{n+1}.

    The ray list is v_1..v_{n+1} followed by -v_{k+1}, ..., -v_{n+1}; the
    default ``k = n`` blows up the single point [0:...:0:1].
    """
    if k is None:
        k = n
    if n < 2 or not 0 <= k <= n + 1:
        raise InputError("need n >= 2 and 0 <= k <= n + 1")
    base = projective_space(n)
    rays = list(base.rays)
    new_ray = {}
    for a in range(k, n + 1):
        new_ray[a] = len(rays)
        rays.append(tuple(-x for x in base.rays[a]))
    cones = []
    for a in range(n + 1):
        face = [j for j in range(n + 1) if j != a]
        if a not in new_ray:
            cones.append(tuple(face))
            continue
        for j in face:
            cones.append(tuple(sorted([i for i in face if i != j] + [new_ray[a]])))
    pts = n + 1 - k
    name = f"BlP{n}" if pts == 1 else (f"P{n}" if pts == 0 else f"Bl{pts}P{n}")
    return Fan(n, tuple(rays), tuple(cones), name=name)


def hirzebruch(a: int) -> Fan:
    rays = ((1, 0), (0, 1), (-1, a), (0, -1))
    cones = ((0, 1), (1, 2), (2, 3), (0, 3))
    return Fan(2, rays, cones, name=f"F{a}")


def product_p1_p1() -> Fan:
    f = hirzebruch(0)
    return Fan(2, f.rays, f.max_cones, name="P1xP1")
