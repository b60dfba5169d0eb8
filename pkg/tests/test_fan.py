import json

import numpy as np
import pytest

from toricsym.exceptions import InputError, PreconditionError
from toricsym.fan import (
    Fan,
    blowup_projective_space,
    build_exact_sequence,
    check_exactness,
    hirzebruch,
    perp_spaces,
    product_p1_p1,
    projective_space,
    select_sigma1,
    validate_fan,
)
from toricsym.lattice import same_rational_span
from toricsym.library import example_names, get_example, library_fans


@pytest.mark.parametrize("name", example_names())
def test_library_fans_validate(name):
    f = get_example(name)
    rep = validate_fan(f)
    assert rep.passed, rep.messages
    esd = build_exact_sequence(f)
    assert all(check_exactness(esd).values())
    assert esd.A.shape == (f.n_rays - f.dim, f.n_rays)


def test_projective_line():
    f = projective_space(1)
    esd = build_exact_sequence(f)
    assert esd.A.tolist() == [[1, 1]]
    p = select_sigma1(f)
    assert p.sigma1 == (0,) and p.pairs == [(0, 1)]


def test_blowup_data():
    f = blowup_projective_space(2)
    esd = build_exact_sequence(f)
    assert esd.A.tolist() == [[1, 1, 0, -1], [0, 0, 1, 1]]
    p = select_sigma1(f)
    assert p.sigma1 == (0, 1, 2) and p.pairs == [(2, 3)]
    perps = perp_spaces(f, p, esd)
    assert len(perps.sigma1_perp) == 1
    assert same_rational_span(perps.sigma_perp, esd.A.tolist())


def test_sigma1_perp_for_hirzebruch():
    f = hirzebruch(2)
    p = select_sigma1(f)
    perps = perp_spaces(f, p)
    assert same_rational_span(perps.sigma1_perp, [(1, -2, 1)])


def test_product_of_lines():
    esd = build_exact_sequence(product_p1_p1())
    assert esd.A.tolist() == [[1, 0, 1, 0], [0, 1, 0, 1]]


def test_incomplete_fan_fails():
    f = Fan(2, ((1, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2)))
    rep = validate_fan(f)
    assert not rep.checks["complete"]
    with pytest.raises(PreconditionError):
        build_exact_sequence(f)


def test_non_primitive_ray():
    f = Fan(2, ((2, 0), (0, 1), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
    assert not validate_fan(f).checks["primitive"]


def test_non_smooth_cone():
    f = Fan(2, ((1, 0), (1, 2), (-1, -1)), ((0, 1), (1, 2), (0, 2)))
    assert not validate_fan(f).checks["smooth"]


@pytest.mark.parametrize(
    "data",
    [
        {"dim": 2, "rays": [[1, 0]], "max_cones": [[0, 3]]},
        {"dim": 2, "rays": [[1, 0, 0]], "max_cones": [[0]]},
        {"dim": 0, "rays": [], "max_cones": []},
        {"rays": [[1]]},
    ],
)
def test_malformed_fans(data):
    with pytest.raises(InputError):
        Fan.from_dict(data)


def test_json_round_trip():
    f = blowup_projective_space(3)
    g = Fan.from_json(json.dumps(f.to_dict()))
    assert g == f


def test_permuted_fan_still_valid():
    f = blowup_projective_space(2).permuted([3, 1, 0, 2])
    assert validate_fan(f).passed


def test_library_is_large_enough():
    names = set(example_names())
    assert {"P1", "P2", "P3", "P4", "BlP2", "BlP3", "BlP4", "P1xP1", "F1", "F2"} <= names
    assert len(library_fans()) == len(names)
