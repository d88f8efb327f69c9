from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from tests.frozen import (
    B12,
    CODIM2,
    CODIM2_SEGMENT,
    DEFECTIVE8,
    EX_QUAD,
    EX_THOMAS,
    PENTATOPE,
    TETRA5,
    TOY_D,
    TRAPEZE,
    U_B12,
    U_CODIM2,
    U_DEFECTIVE8,
    U_EX_THOMAS,
    U_TOY_D,
    U_TRAPEZE,
    WORKED,
    WORKED_SWEEP,
    worked_heights,
)
from tropsurf.engine import (
    Certificate,
    LiftReject,
    classify,
    eq_b114_distance,
    is_generic,
    lift_check,
    lineality_vector,
    oracle_singular_points,
    shifted_heights,
    singular_family,
)
from tropsurf.subdivision import PointConfig

F = Fraction

EQ_ROLES = {"a": 0, "b": 1, "c": 3, "d": 2, "e": 4, "f": 5}


def test_lineality_vector_is_evaluation():
    v = lineality_vector(EX_THOMAS, (1, 0, 0))
    assert v == tuple(F(p[0]) for p in EX_THOMAS.points)
    shifted = shifted_heights(EX_THOMAS, U_EX_THOMAS, (1, 0, 0))
    assert shifted == tuple(u + x for u, x in zip(U_EX_THOMAS, v))


def test_classify_quadrangle_example():
    rep = classify(EX_THOMAS, U_EX_THOMAS)
    assert rep.codim == 1
    assert rep.max_dimensional is True
    assert rep.generic is True
    assert rep.circuit.indices == (0, 1, 2)
    assert not rep.refusals
    by_loc = {sp.location: sp for sp in rep.points}
    assert set(by_loc) == {(F(-1), F(-1), F(0)), (F(0), F(0), F(0))}

    real = by_loc[(F(-1), F(-1), F(0))]
    assert real.label == "c-barycenter"
    assert real.certificate.flag == ((6,), (3, 4, 5, 6), (0, 1, 2, 3, 4, 5, 6))
    assert real.certificate.case == "c"
    assert real.metric["weights"] == (1, 1, 1)
    # barycenter of the three adjacent quadrangle corners
    vertices = real.metric["vertices"]
    assert set(vertices) == {EX_QUAD["D"], EX_QUAD["E"], EX_QUAD["C"]}

    virtual = by_loc[(F(0), F(0), F(0))]
    assert virtual.label == "c-virtual-barycenter"
    assert virtual.certificate.flag == ((3,), (3, 4, 5, 6), (0, 1, 2, 3, 4, 5, 6))
    assert virtual.metric["weights"] == (-1, 1, 2)
    assert set(virtual.metric["vertices"]) == {EX_QUAD["E"], EX_QUAD["B"], EX_QUAD["A"]}
    # signed weights balance the virtual corner against the real ones
    total = sum(virtual.metric["weights"])
    combo = tuple(
        sum(w * v[i] for w, v in zip(virtual.metric["weights"], virtual.metric["vertices"]))
        for i in range(3)
    )
    assert combo == tuple(total * x for x in virtual.location)


@pytest.mark.parametrize("u_e, expected", WORKED_SWEEP, ids=[str(r[0]) for r in WORKED_SWEEP])
def test_worked_sweep(u_e, expected):
    rep = classify(WORKED, worked_heights(u_e))
    assert rep.generic is True
    got = {
        sp.location: (sp.label, sp.metric.get("distance_from_vertex"))
        for sp in rep.points
    }
    assert got == expected


def test_toy_type_d_midpoint():
    rep = classify(TOY_D, U_TOY_D)
    (sp,) = rep.points
    assert sp.location == (0, 0, 0)
    assert sp.label == "b2"
    assert sp.metric["midpoint"] == (0, 0, 0)
    assert set(sp.metric["edge_vertices"]) == {(F(2), F(0), F(0)), (F(-2), F(0), F(0))}
    assert sp.certificate.case == "b"


def test_trapeze_corner_mean():
    rep = classify(TRAPEZE, U_TRAPEZE)
    (sp,) = rep.points
    assert sp.location == (0, 0, 0)
    assert sp.label == "d-trapeze"
    corners = sp.metric["corners"]
    assert set(corners) == {
        (F(1), F(3), F(0)),
        (F(1), F(-3), F(0)),
        (F(-1), F(3), F(0)),
        (F(-1), F(-3), F(0)),
    }
    mean = tuple(sum(c[i] for c in corners) / 4 for i in range(3))
    assert mean == sp.location
    assert sp.certificate.case == "d"


def test_unbounded_edge_point():
    rep = classify(B12, U_B12)
    (sp,) = rep.points
    assert sp.location == (1, 0, 0)
    assert sp.label == "b12"
    assert sp.metric["edge_vertices"] == ((F(5, 3), F(0), F(0)),)
    assert sp.metric["distance_from_vertex"] == F(2, 3)


def test_vertex_labels():
    (a1,) = classify(PENTATOPE, (0,) * 5).points
    assert a1.location == (0, 0, 0)
    assert a1.label == "a1"
    assert a1.metric["pentatope"] == (2, 3)

    (a2,) = classify(TETRA5, (0,) * 5).points
    assert a2.location == (0, 0, 0)
    assert a2.label == "a2(5)"
    assert a2.metric["multiplicity"] == 5
    assert a2.metric["catalog"] == "a2/vol5"
    assert a2.metric["interior_point"] == 4


def test_lift_check_accepts_singular_point():
    cert = lift_check(WORKED, worked_heights(-3), (1, 0, 0))
    assert isinstance(cert, Certificate)
    assert cert.flag == ((6,), (4, 5, 6), (0, 1, 2, 3, 4, 5, 6))
    assert cert.maximal
    assert cert.case == "b"


def test_lift_check_rejects_ordinary_point():
    rej = lift_check(WORKED, worked_heights(-3), (0, 0, 1))
    assert isinstance(rej, LiftReject)
    assert "not a flat" in rej.reason


def test_defective_heights_refused():
    rep = classify(DEFECTIVE8, U_DEFECTIVE8)
    assert rep.generic is False
    assert not rep.points
    (refusal,) = rep.refusals
    assert "not generic" in refusal.reason
    assert set(refusal.detail) == {"base", "directions", "interval"}
    assert not is_generic(DEFECTIVE8, U_DEFECTIVE8)
    assert is_generic(EX_THOMAS, U_EX_THOMAS)


def test_codim_two_refused_by_classify():
    rep = classify(CODIM2, U_CODIM2)
    assert rep.codim == 2
    assert not rep.points
    (refusal,) = rep.refusals
    assert "codimension 1" in refusal.reason


def test_eq_b114_distance_worked_values():
    assert eq_b114_distance(WORKED, worked_heights(-3), EQ_ROLES) == F(2, 3)
    assert eq_b114_distance(WORKED, worked_heights(-2), EQ_ROLES) == F(1, 6)
    assert eq_b114_distance(WORKED, worked_heights(F(-7, 2)), EQ_ROLES) == F(11, 12)


def test_eq_b114_distance_zero_when_point_at_vertex():
    # distance 0 <=> the formula point hits the edge vertex: u_a/3 = u_e/2 - u_f/6
    u = (0, 0, 0, 0, F(-5, 3), -5, -2)
    assert eq_b114_distance(WORKED, u, EQ_ROLES) == 0


def test_eq_b114_distance_checks_normal_form():
    with pytest.raises(ValueError, match="role c"):
        eq_b114_distance(WORKED, worked_heights(-3), {"a": 0, "b": 1, "c": 2, "d": 3, "e": 4, "f": 5})


@pytest.mark.parametrize(
    "cfg, u",
    [
        (EX_THOMAS, U_EX_THOMAS),
        (WORKED, worked_heights(-3)),
        (WORKED, worked_heights(-2)),
        (TOY_D, U_TOY_D),
        (TRAPEZE, U_TRAPEZE),
        (B12, U_B12),
        (PENTATOPE, (0,) * 5),
        (TETRA5, (0,) * 5),
    ],
)
def test_oracle_agrees_with_classify(cfg, u):
    rep = classify(cfg, u)
    assert set(oracle_singular_points(cfg, u)) == {sp.location for sp in rep.points}


def test_singular_family_isolated_points():
    pieces = singular_family(EX_THOMAS, U_EX_THOMAS)
    assert [(p.dim, p.base) for p in pieces] == [
        (0, (F(-1), F(-1), F(0))),
        (0, (F(0), F(0), F(0))),
    ]


def test_singular_family_codim_two_segment_and_ray():
    pieces = singular_family(CODIM2, U_CODIM2)
    assert len(pieces) == 2
    segment, ray = pieces
    assert segment.dim == 1 and not segment.unbounded
    assert segment.endpoints == CODIM2_SEGMENT
    assert ray.dim == 1 and ray.unbounded
    assert ray.endpoints == (CODIM2_SEGMENT[1],)
    assert ray.direction == (1, 0, 0)


def test_singular_family_defective_segment():
    pieces = singular_family(DEFECTIVE8, U_DEFECTIVE8)
    (segment,) = pieces
    assert segment.dim == 1
    assert segment.endpoints == ((F(-1, 2), F(0), F(0)), (F(1), F(0), F(0)))
    assert not segment.unbounded


@settings(max_examples=25)
@given(
    st.sampled_from([-1, -2, -3, -4, -5]),
    st.fractions(min_value=-2, max_value=2, max_denominator=3),
)
def test_classify_points_survive_lift_check(u_e, jitter):
    """Every reported singular point carries a flag that re-verifies."""
    u = worked_heights(F(u_e) + jitter)
    rep = classify(WORKED, u)
    for sp in rep.points:
        cert = lift_check(WORKED, u, sp.location)
        assert isinstance(cert, Certificate)
        assert cert.flag == sp.certificate.flag
