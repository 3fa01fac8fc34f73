import pytest
from hypothesis import assume, given, settings

from plane_germs.bipoly import BiPoly
from plane_germs.invariants import (NonIsolatedError, casas_check, equisingular,
                                    equisingularity_type, intersection_multiplicity,
                                    milnor_number, shear_seed)

from conftest import uv, xy
from strategies import germs, units


def i0(a, b, method="both"):
    return intersection_multiplicity(xy(a), xy(b), method)


# -- intersection multiplicity ----------------------------------------------

def test_i0_goldens():
    assert i0("x", "y") == 1
    assert i0("y^2 - x^3", "y") == 3
    assert i0("y^2 - x^3", "y^2 + x^3") == 6


def test_i0_common_component_is_infinite():
    r = i0("x*y", "x*(y - x^2)")
    assert r.infinite and r == "inf"


def test_i0_away_from_origin_is_zero():
    assert i0("x - 1", "y") == 0


def test_i0_independent_of_shear_start():
    with shear_seed(5):
        assert i0("y^2 - x^3", "y^2 + x^3", "resultant") == 6


def test_i0_over_extension():
    # y^2 - 2x^2 is two lines with irrational slopes
    assert i0("y^2 - 2*x^2", "y - x^3") == 2


@given(germs(3, 3), germs(3, 3))
def test_i0_symmetric_and_methods_agree(f, g):
    a = intersection_multiplicity(f, g, "resultant")
    b = intersection_multiplicity(g, f, "zeuthen")
    assert a == b


@given(germs(3, 2), germs(3, 2), germs(3, 2))
def test_i0_additive(f, g, h):
    a = intersection_multiplicity(f, g, "resultant")
    b = intersection_multiplicity(f, h, "resultant")
    c = intersection_multiplicity(f, g * h, "resultant")
    if a.infinite or b.infinite:
        assert c.infinite
    else:
        assert int(c) == int(a) + int(b)


# -- Milnor numbers -----------------------------------------------------------

def test_milnor_goldens():
    assert milnor_number(xy("y^2 - x^3")) == 2
    assert milnor_number(xy("x*y")) == 1
    assert milnor_number(xy("y - x^2")) == 0


def test_milnor_non_isolated():
    with pytest.raises(NonIsolatedError, match="y"):
        milnor_number(xy("x*y^2"))


def test_milnor_zeuthen_route():
    assert milnor_number(xy("y^3 - x^4"), "zeuthen") == 6


@given(germs(4, 3), units())
def test_milnor_unit_invariance(h, u):
    try:
        mu = milnor_number(h)
    except NonIsolatedError:
        assume(False)
    assert milnor_number(h * u) == mu


# -- Casas identity ------------------------------------------------------------

@pytest.mark.parametrize("H, lhs, rhs", [("u", -1, -1), ("v", 1, 1), ("u - v", -1, -1)])
def test_casas_goldens(H, lhs, rhs):
    r = casas_check(xy("x"), xy("y^2 - x^3"), uv(H))
    assert (r.lhs, r.rhs) == (lhs, rhs) and r.holds


def test_casas_components():
    r = casas_check(xy("x"), xy("y^2 - x^3"), uv("v"))
    assert (r.mu_h, r.i_fg, r.mu_H, r.i_DH) == (2, 2, 0, 3)


# -- equisingularity ---------------------------------------------------------

def test_type_of_line_and_cusp():
    t = equisingularity_type([("f", xy("x")), ("g", xy("y^2 - x^3"))])
    assert sorted((b.label, b.semigroup) for b in t.branches) == [("f", (1,)), ("g", (2, 3))]
    assert t.matrix[0][1] == 2


def test_type_of_node():
    t = equisingularity_type([("f", xy("x*y"))])
    assert len(t.branches) == 2 and t.matrix[0][1] == 1


def test_type_semigroups():
    t = equisingularity_type({"f": xy("y^2 - x^3"), "g": xy("y^2 - x^5")})
    assert sorted(b.semigroup for b in t.branches) == [(2, 3), (2, 5)]


def test_type_splits_conjugate_branches():
    t = equisingularity_type([("f", xy("y^2 - 2*x^2"))])
    assert len(t.branches) == 2 and t.matrix[0][1] == 1


def test_equisingular_verdicts():
    cusp = equisingularity_type([("f", xy("y^2 - x^3"))])
    assert equisingular(cusp, equisingularity_type([("f", xy("y^2 - 2*x^3"))]))
    assert not equisingular(cusp, equisingularity_type([("f", xy("y^2 - x^5"))]))
    v = equisingular(cusp, cusp)
    assert v and v.matching == [0]


def test_equisingular_respects_labels():
    a = equisingularity_type([("f", xy("x")), ("g", xy("y"))])
    b = equisingularity_type([("f", xy("y")), ("g", xy("x"))])
    assert equisingular(a, b)
    c = equisingularity_type([("f", xy("x")), ("g", xy("x - y^2"))])
    assert not equisingular(a, c)
