"""Built-in fans: projective spaces, their blow-ups at toric fixed points,
P1 x P1 and Hirzebruch surfaces."""
from __future__ import annotations

from typing import Callable

from .exceptions import InputError
from .fan import Fan, blowup_projective_space, hirzebruch, product_p1_p1, projective_space


def _entries() -> dict[str, Callable[[], Fan]]:
    lib: dict[str, Callable[[], Fan]] = {}
    for n in range(1, 5):
        lib[f"P{n}"] = lambda n=n: projective_space(n)
    for n in range(2, 5):
        # k ranges so that 1..n+1 points are blown up
        for k in range(n, -1, -1):
            pts = n + 1 - k
            name = f"BlP{n}" if pts == 1 else f"Bl{pts}P{n}"
            lib[name] = lambda n=n, k=k: blowup_projective_space(n, k)
    lib["P1xP1"] = product_p1_p1
    for a in range(1, 4):
        lib[f"F{a}"] = lambda a=a: hirzebruch(a)
    return lib


LIBRARY = _entries()


def example_names() -> list[str]:
    return list(LIBRARY)


def get_example(name: str) -> Fan:
    try:
        return LIBRARY[name]()
    except KeyError:
        raise InputError(f"unknown example {name!r}; choose from {', '.join(LIBRARY)}") from None


def library_fans() -> list[Fan]:
    return [get_example(n) for n in LIBRARY]
