from fractions import Fraction

import pytest

from toricsym.coxring import (
    PresentationKind,
    apply_identifications,
    cox_presentation,
    phi_bar_image,
    phi_polynomial,
)
from toricsym.exceptions import InputError
from toricsym.fan import blowup_projective_space, projective_space, select_sigma1
from toricsym.library import example_names, get_example


def test_blowup_presentations():
    f = blowup_projective_space(2)
    r = cox_presentation(f, kind="R")
    assert [r.format_polynomial(p) for p in r.relations] == ["S1*T1 + S2*T2 + S3*S4*T3"]
    assert r.to_dict()["identifications"] == [{"variable": "T4", "coefficient": -1, "target": "T3"}]
    rp = cox_presentation(f, kind="Rprime")
    assert len(rp.relations) == 2
    rt = cox_presentation(f, kind="RtildePrime")
    texts = sorted(rt.format_polynomial(p) for p in rt.relations)
    assert texts == ["S1*T^1 + S2*T^2 + S3*T^3", "S3*T^3 + S4*T^4"]


def test_projective_line_has_no_relations():
    r = cox_presentation(projective_space(1), kind="R")
    assert r.relations == ()
    assert [v.name for v in r.active] == ["S1", "S2", "T1"]


@pytest.mark.parametrize("name", example_names())
@pytest.mark.parametrize("kind", list(PresentationKind))
def test_relations_are_homogeneous_of_bidegree_zero_one(name, kind):
    f = get_example(name)
    pres = cox_presentation(f, kind=kind)
    for rel in pres.relations:
        degrees = {pres.bidegree(e) for e in rel}
        assert degrees == {((0,) * (f.n_rays - f.dim), 1)}


def test_variable_classes():
    f = blowup_projective_space(2)
    r = cox_presentation(f, kind="R")
    t3 = r.variables[f.n_rays + 2]
    assert t3.pic_class == (1, -2) and t3.fiber_deg == 1
    rp = cox_presentation(f, kind="Rprime")
    assert rp.variables[f.n_rays + 3].pic_class == (1, -1)


def test_phi_bar():
    f = blowup_projective_space(2)
    p = select_sigma1(f)
    assert phi_bar_image(f, p, {"T^3": 1}) == (0, 0, 0, 1, 0, 0, 1, 0)
    assert phi_bar_image(f, p, {"T^4": 1}) == (0, 0, 1, 0, 0, 0, 0, 1)
    assert phi_bar_image(f, p, {"S1": 2, "T^1": 1}) == (2, 0, 0, 0, 1, 0, 0, 0)
    with pytest.raises(InputError):
        phi_bar_image(f, p, {"T9": 1})


def test_phi_maps_relations_into_ideal():
    """Each R' relation goes to a multiple of the R relation or to an
    identification S^rho (T_rho + T_{-rho})."""
    f = blowup_projective_space(2)
    p = select_sigma1(f)
    r = cox_presentation(f, p, "R")
    rp = cox_presentation(f, p, "Rprime")
    rel = {apply_identifications(r, e)[1]: c for e, c in r.relations[0].items()}
    for poly in rp.relations:
        image = {}
        for e, c in phi_polynomial(f, p, poly).items():
            s, e2 = apply_identifications(r, e)
            image[e2] = image.get(e2, 0) + s * c
        image = {e: c for e, c in image.items() if c}
        if image:
            ratio = {image[e] / rel[e] for e in rel if e in image}
            assert set(image) == set(rel) and len(ratio) == 1


def test_parse_kind():
    assert PresentationKind.parse("r'") is PresentationKind.Rprime
    with pytest.raises(InputError):
        PresentationKind.parse("Q")


def test_text_and_dict_views():
    pres = cox_presentation(projective_space(2), kind="Rprime")
    assert "  S1*T^1 + S2*T^2 + S3*T^3" in pres.to_text().splitlines()
    d = pres.to_dict()
    assert d["kind"] == "Rprime" and len(d["variables"]) == 6
