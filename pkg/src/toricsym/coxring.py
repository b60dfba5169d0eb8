"""Graded polynomial presentations of the Cox ring of P(T_X) and its
hypertoric model.

Monomials are exponent tuples of length 2N: the first N entries are the
exponents of S_1..S_N, the last N those of the fiber variables (T_rho for
the kinds ``R`` and ``Rtilde``, T^rho for ``Rprime`` and ``RtildePrime``).
Polynomials are dicts mapping exponent tuples to Fractions.

Bidegrees are (class in Pic(X) = Z^(N-n), fiber degree):

* ``S_rho``  -> (a_rho, 0)
* ``T_rho``  -> (-a_rho - a_{-rho}, 1), with a_{-rho} = 0 when -rho is no ray
* ``T^rho``  -> (-a_rho, 1)
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Optional, Sequence, Union

from .exceptions import InputError
from .fan import ExactSequenceData, Fan, SignedRayPairing, build_exact_sequence, perp_spaces, select_sigma1

Exponents = tuple[int, ...]
Polynomial = dict


class PresentationKind(str, enum.Enum):
    R = "R"
    Rprime = "Rprime"
    Rtilde = "Rtilde"
    RtildePrime = "RtildePrime"

    @property
    def uses_lower_t(self) -> bool:
        return self in (PresentationKind.R, PresentationKind.Rtilde)

    @classmethod
    def parse(cls, value) -> "PresentationKind":
        if isinstance(value, cls):
            return value
        aliases = {"r'": "Rprime", "rprime": "Rprime", "r": "R", "rtilde": "Rtilde",
                   "rtildeprime": "RtildePrime", "rtilde'": "RtildePrime"}
        key = aliases.get(str(value).lower(), str(value))
        try:
            return cls(key)
        except ValueError:
            raise InputError(f"unknown presentation {value!r}") from None


@dataclass(frozen=True)
class Variable:
    name: str
    index: int
    pic_class: tuple[int, ...]
    fiber_deg: int


@dataclass(frozen=True)
class Identification:
    """``eliminated = coefficient * target`` (both variable indices)."""

    eliminated: int
    coefficient: int
    target: int


@dataclass(frozen=True)
class GradedPresentation:
    kind: PresentationKind
    n_rays: int
    variables: tuple[Variable, ...]
    relations: tuple[Polynomial, ...]
    identifications: tuple[Identification, ...] = ()

    @property
    def active(self) -> tuple[Variable, ...]:
        gone = {i.eliminated for i in self.identifications}
        return tuple(v for v in self.variables if v.index not in gone)

    @property
    def active_fiber_indices(self) -> tuple[int, ...]:
        """Ray indices rho whose fiber variable survives elimination."""
        N = self.n_rays
        return tuple(v.index - N for v in self.active if v.index >= N)

    def bidegree(self, exps: Sequence[int]) -> tuple[tuple[int, ...], int]:
        if len(exps) != 2 * self.n_rays:
            raise InputError(f"expected {2 * self.n_rays} exponents, got {len(exps)}")
        r = len(self.variables[0].pic_class)
        cls = [0] * r
        fib = 0
        for v, e in zip(self.variables, exps):
            if e:
                for k in range(r):
                    cls[k] += e * v.pic_class[k]
                fib += e * v.fiber_deg
        return tuple(cls), fib

    def format_monomial(self, exps: Sequence[int]) -> str:
        parts = []
        for v, e in zip(self.variables, exps):
            if e == 1:
                parts.append(v.name)
            elif e:
                parts.append(f"{v.name}^{e}" if "^" not in v.name else f"({v.name})^{e}")
        return "*".join(parts) or "1"

    def format_polynomial(self, poly: Polynomial) -> str:
        out = []
        for exps, c in sorted(poly.items(), reverse=True):
            mono = self.format_monomial(exps)
            mag = abs(c)
            term = mono if mag == 1 else f"{mag}*{mono}"
            out.append(("- " if c < 0 else "+ ") + term)
        s = " ".join(out)
        return s[2:] if s.startswith("+ ") else "-" + s[1:]

    def to_dict(self) -> dict:
        return {
            "kind": self.kind.value,
            "variables": [
                {"name": v.name, "class": list(v.pic_class), "fiber_degree": v.fiber_deg}
                for v in self.variables
            ],
            "relations": [
                [{"exponents": list(e), "coefficient": _json_number(c)} for e, c in sorted(p.items(), reverse=True)]
                for p in self.relations
            ],
            "identifications": [
                {
                    "variable": self.variables[i.eliminated].name,
                    "coefficient": i.coefficient,
                    "target": self.variables[i.target].name,
                }
                for i in self.identifications
            ],
        }

    def to_text(self) -> str:
        lines = [f"presentation {self.kind.value}", "variables:"]
        for v in self.variables:
            lines.append(f"  {v.name:<6} class {list(v.pic_class)}  fiber {v.fiber_deg}")
        lines.append("relations:")
        for p in self.relations:
            lines.append(f"  {self.format_polynomial(p)}")
        if not self.relations:
            lines.append("  (none)")
        if self.identifications:
            lines.append("identifications:")
            for i in self.identifications:
                sign = "-" if i.coefficient < 0 else ""
                lines.append(f"  {self.variables[i.eliminated].name} = {sign}{self.variables[i.target].name}")
        return "\n".join(lines)


def _json_number(c: Fraction):
    return c.numerator if c.denominator == 1 else f"{c.numerator}/{c.denominator}"


def _mono(N: int, s: Mapping[int, int], t: Mapping[int, int]) -> Exponents:
    e = [0] * (2 * N)
    for i, k in s.items():
        e[i] += k
    for i, k in t.items():
        e[N + i] += k
    return tuple(e)


def _add(poly: dict, exps: Exponents, c) -> None:
    c = poly.get(exps, 0) + Fraction(c)
    if c:
        poly[exps] = c
    else:
        poly.pop(exps, None)


def cox_presentation(
    f: Fan,
    p: Optional[SignedRayPairing] = None,
    kind: Union[PresentationKind, str] = PresentationKind.R,
    esd: Optional[ExactSequenceData] = None,
) -> GradedPresentation:
    kind = PresentationKind.parse(kind)
    p = p or select_sigma1(f)
    esd = esd or build_exact_sequence(f)
    N = f.n_rays
    cols = esd.columns()
    r = esd.pic_rank
    zero = (0,) * r

    def neg(v):
        return tuple(-x for x in v)

    def plus(u, v):
        return tuple(x + y for x, y in zip(u, v))

    variables = [Variable(f"S{i + 1}", i, cols[i], 0) for i in range(N)]
    for i in range(N):
        if kind.uses_lower_t:
            j = p.partner(i)
            variables.append(Variable(f"T{i + 1}", N + i, neg(plus(cols[i], cols[j] if j is not None else zero)), 1))
        else:
            variables.append(Variable(f"T^{i + 1}", N + i, neg(cols[i]), 1))

    perps = perp_spaces(f, p, esd)
    relations = []
    identifications = []

    def s_upper(rho):
        j = p.partner(rho)
        return {rho: 1} if j is None else {rho: 1, j: 1}

    if kind in (PresentationKind.R, PresentationKind.Rtilde):
        for u in perps.sigma1_perp:
            poly: dict = {}
            for coeff, rho in zip(u, p.sigma1):
                if coeff:
                    _add(poly, _mono(N, s_upper(rho), {rho: 1}), coeff)
            relations.append(poly)
        for kept, dropped in p.pairs:
            if kind is PresentationKind.R:
                identifications.append(Identification(N + dropped, -1, N + kept))
            else:
                poly = {}
                su = s_upper(kept)
                _add(poly, _mono(N, su, {kept: 1}), 1)
                _add(poly, _mono(N, su, {dropped: 1}), 1)
                relations.append(poly)
    elif kind is PresentationKind.Rprime:
        for row in perps.sigma_perp:
            poly = {}
            for rho, coeff in enumerate(row):
                if coeff:
                    _add(poly, _mono(N, {rho: 1}, {rho: 1}), coeff)
            relations.append(poly)
    else:
        for u in perps.sigma1_perp:
            poly = {}
            for coeff, rho in zip(u, p.sigma1):
                if coeff:
                    _add(poly, _mono(N, {rho: 1}, {rho: 1}), coeff)
            relations.append(poly)
        for kept, dropped in p.pairs:
            poly = {}
            _add(poly, _mono(N, {kept: 1}, {kept: 1}), 1)
            _add(poly, _mono(N, {dropped: 1}, {dropped: 1}), 1)
            relations.append(poly)

    return GradedPresentation(kind, N, tuple(variables), tuple(relations), tuple(identifications))


# --------------------------------------------------------------------------
# the comparison map R' -> R


def _parse_monomial(N: int, monomial, upper_names: bool) -> Exponents:
    if isinstance(monomial, Mapping):
        e = [0] * (2 * N)
        for name, k in monomial.items():
            idx = _variable_index(N, str(name), upper_names)
            e[idx] += int(k)
        monomial = e
    exps = tuple(int(x) for x in monomial)
    if len(exps) != 2 * N or any(x < 0 for x in exps):
        raise InputError(f"not a monomial in {2 * N} variables: {list(monomial)}")
    return exps


def _variable_index(N: int, name: str, upper: bool) -> int:
    prefix = "T^" if upper else "T"
    try:
        if name.startswith("S"):
            i = int(name[1:])
            base = 0
        elif name.startswith(prefix):
            i = int(name[len(prefix):])
            base = N
        else:
            raise ValueError
    except ValueError:
        raise InputError(f"unknown variable {name!r}") from None
    if not 1 <= i <= N:
        raise InputError(f"unknown variable {name!r}")
    return base + i - 1


def phi_bar_image(f: Fan, p: SignedRayPairing, monomial) -> Exponents:
    """Image of an R' monomial under T^rho -> S_{-rho} T_rho (or T_rho when
    -rho is not a ray), S_rho -> S_rho.

    ``monomial`` is an exponent tuple or a mapping like ``{"S1": 1, "T^3": 2}``.
    The result is written in all 2N variables S_rho, T_rho of R, before the
    identification T_{-rho} = -T_rho.
    """
    N = f.n_rays
    exps = _parse_monomial(N, monomial, upper_names=True)
    out = list(exps[:N]) + [0] * N
    for rho in range(N):
        e = exps[N + rho]
        if not e:
            continue
        j = p.partner(rho)
        if j is not None:
            out[j] += e
        out[N + rho] += e
    return tuple(out)


def phi_polynomial(f: Fan, p: SignedRayPairing, poly: Polynomial) -> Polynomial:
    out: dict = {}
    for exps, c in poly.items():
        _add(out, phi_bar_image(f, p, exps), c)
    return out


def apply_identifications(pres: GradedPresentation, exps: Exponents) -> tuple[int, Exponents]:
    """Rewrite a monomial in the active variables; returns (sign, exponents)."""
    e = list(exps)
    sign = 1
    for ident in pres.identifications:
        k = e[ident.eliminated]
        if k:
            e[ident.eliminated] = 0
            e[ident.target] += k
            sign *= ident.coefficient ** k
    return sign, tuple(e)
