"""Input coercion shared by the estimators and the command line."""
from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .exceptions import InputError, NotFittedError
from .fan import Fan
from .lattice import as_int_matrix


def check_fan(X) -> Fan:
    """Accept a Fan, a mapping in the fan JSON schema, a JSON string, a
    path to a JSON file or the name of a built-in example."""
    if isinstance(X, Fan):
        return X
    if isinstance(X, dict):
        return Fan.from_dict(X)
    if isinstance(X, (str, os.PathLike)):
        text = str(X)
        if os.path.isfile(text):
            with open(text, encoding="utf-8") as fh:
                return Fan.from_json(fh.read(), name=os.path.splitext(os.path.basename(text))[0])
        if text.lstrip().startswith("{"):
            return Fan.from_json(text)
        from .library import get_example

        return get_example(text)
    raise InputError(f"cannot interpret {type(X).__name__} as a fan")


def check_int_matrix(A) -> np.ndarray:
    try:
        return as_int_matrix(A)
    except (TypeError, ValueError) as exc:
        raise InputError(f"expected an integer matrix: {exc}") from None


def check_rational_vector(v, length: int, name: str = "vector") -> tuple[Fraction, ...]:
    if isinstance(v, str):
        v = [p for p in v.split(",") if p.strip()]
    try:
        out = tuple(Fraction(str(x).strip()) if isinstance(x, str) else Fraction(x) for x in v)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise InputError(f"{name}: {exc}") from None
    if len(out) != length:
        raise InputError(f"{name} must have {length} entries, got {len(out)}")
    return out


def check_points(X, n_coords: int) -> list[tuple[tuple[Fraction, ...], tuple[Fraction, ...]]]:
    """Rows of length 2N, read as (z_1..z_N, w_1..w_N)."""
    rows = np.atleast_2d(np.array(X, dtype=object))
    if rows.ndim != 2 or rows.shape[1] != 2 * n_coords:
        raise InputError(f"expected rows of {2 * n_coords} coordinates, got shape {rows.shape}")
    out = []
    for row in rows:
        try:
            vals = [Fraction(x) for x in row]
        except (TypeError, ValueError) as exc:
            raise InputError(f"non-rational coordinate: {exc}") from None
        out.append((tuple(vals[:n_coords]), tuple(vals[n_coords:])))
    return out


def check_positive_int(value, name: str, minimum: int = 0) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise InputError(f"{name} must be an integer")
    if value < minimum:
        raise InputError(f"{name} must be at least {minimum}")
    return int(value)


def check_is_fitted(estimator, attributes: Iterable[str]) -> None:
    missing = [a for a in attributes if not hasattr(estimator, a)]
    if missing:
        raise NotFittedError(
            f"{type(estimator).__name__} is not fitted yet; call fit before using this method"
        )


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, fixed separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"
