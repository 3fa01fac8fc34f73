import pytest
from flint import fmpq
from hypothesis import given

from plane_germs.bipoly import BiPoly, TruncSeries
from plane_germs.numbers import (QQ, AlgebraError, CapacityError, IncompatibleFieldError,
                                 describe_scalar, minimal_polynomial, parse_rational,
                                 tower_degree_cap)
from plane_germs.series import NonInvertibleSeriesError, Series
from plane_germs.upoly import UndefinedResultantError, UniPoly, factor_degree_cap, resultant, uni_factor

from conftest import xy
from strategies import bipolys


x, y = BiPoly.x(), BiPoly.y()


# -- towers -----------------------------------------------------------------

def test_sqrt2_arithmetic():
    K = QQ.adjoin([-2, 0, 1], "a")
    a = K.generator()
    assert a * a == 2
    assert (1 / a) * a == 1
    assert list(minimal_polynomial(a + 1).coeffs()) == [-1, -2, 1]


def test_two_level_tower_primitive_element():
    K = QQ.adjoin([-2, 0, 1], "a")
    L = K.adjoin([-3, 0, 1], "b")
    a, b = L.generators()
    assert L.degree == 4
    assert list(minimal_polynomial(a + b).coeffs()) == [1, 0, -10, 0, 1]
    assert (a * b) ** 2 == 6


def test_incompatible_towers():
    a = QQ.adjoin([-2, 0, 1], "a").generator()
    b = QQ.adjoin([-3, 0, 1], "b").generator()
    with pytest.raises(IncompatibleFieldError):
        a + b


def test_tower_cap():
    with tower_degree_cap(2):
        K = QQ.adjoin([-2, 0, 1], "a")
        with pytest.raises(CapacityError, match="max_tower_degree"):
            K.adjoin([-3, 0, 1], "b")


def test_describe_scalar_carries_minpoly():
    a = QQ.adjoin([-2, 0, 1], "a").generator()
    d = describe_scalar(a)
    assert d["minpoly"] == ["-2", "0", "1"]
    assert d["tower"]["degree"] == 2
    assert describe_scalar(fmpq(3, 4)) == {"rational": "3/4"}


def test_parse_rational():
    assert parse_rational("-3/4") == fmpq(-3, 4)
    assert parse_rational("5") == 5


# -- bivariate polynomials ---------------------------------------------------

def test_difference_of_squares():
    assert (x + y) * (x - y) == x ** 2 - y ** 2


def test_partial_derivative():
    assert xy("y^2 - x^3").derivative("y") == 2 * y


def test_geometric_series_truncated():
    s = TruncSeries(1 + x, 4) * TruncSeries(1 - x + x ** 2 - x ** 3, 4)
    assert s.body == BiPoly.const(1)
    assert s.precision == 4


def test_coefficient_access_and_orders():
    p = xy("x^2*y + x*y^3 + x^5*y^3")
    assert p.coefficient(2, 1) == 1
    assert p.order() == 3
    assert p.x_order() == 1 and p.y_order() == 1


# -- resultants and factorization --------------------------------------------

def _in_y(p):
    d = max(j for _, j in p.support())
    parts = [BiPoly.zero()] * (d + 1)
    for (i, j), c in p.coeffs().items():
        parts[j] = parts[j] + BiPoly.monomial(i, 0, c)
    return UniPoly(parts)


def test_resultant_cusp_and_axis():
    assert resultant(_in_y(xy("y^2 - x^3")), _in_y(y)) == -x ** 3


def test_resultant_linear_sign_convention():
    assert resultant(UniPoly([fmpq(-2), 1]), UniPoly([fmpq(-5), 1])) == fmpq(2) - 5


def test_resultant_common_factor_vanishes():
    p = _in_y(xy("y^2 - x^3"))
    assert resultant(p, p).is_zero()


def test_resultant_of_zeros():
    with pytest.raises(UndefinedResultantError):
        resultant(UniPoly([]), UniPoly([]))


def test_factor_rational_roots():
    fac = list(uni_factor(UniPoly([fmpq(-1), 0, 1])))
    assert sorted(f.coeffs[0] for f, _ in fac) == [-1, 1]


def test_factor_irreducible_quadratic():
    fac = list(uni_factor(UniPoly([fmpq(-2), 0, 1])))
    assert len(fac) == 1 and fac[0][0].degree == 2 and fac[0][1] == 1


def test_factor_perfect_cube():
    q = UniPoly([fmpq(1, 4), 1]) ** 3
    fac = list(uni_factor(q))
    assert fac == [(UniPoly([fmpq(1, 4), 1]), 3)]


def test_factor_over_extension_splits():
    K = QQ.adjoin([-2, 0, 1], "a")
    fac = list(uni_factor(UniPoly([K.lift(-2), K.lift(0), K.lift(1)]), K))
    assert [f.degree for f, _ in fac] == [1, 1]


def test_factor_cap():
    with factor_degree_cap(3):
        with pytest.raises(CapacityError, match="3"):
            uni_factor(UniPoly([fmpq(-2), 0, 0, 0, 1]))


# -- series -----------------------------------------------------------------

def test_series_reversion():
    r = Series.from_list([0, 1, 1], prec=4).reverse()
    assert r == Series.from_list([0, 1, -1, 2], prec=4)


def test_series_reversion_linear_and_identity():
    assert Series.from_list([0, 2], prec=4).reverse() == Series.from_list([0, fmpq(1, 2)], prec=4)
    assert Series.from_list([0, 1], prec=4).reverse() == Series.from_list([0, 1], prec=4)


def test_series_reversion_needs_linear_term():
    with pytest.raises(NonInvertibleSeriesError):
        Series.from_list([0, 0, 1], prec=4).reverse()


def test_series_compose_roundtrip():
    s = Series.from_list([0, 1, 3, -2], prec=6)
    assert s.compose(s.reverse()) == Series.from_list([0, 1], prec=6)


# -- ring axioms ------------------------------------------------------------

@given(bipolys(), bipolys(), bipolys())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == BiPoly.zero()
    assert a * 1 == a


@given(bipolys(), bipolys())
def test_leibniz_rule(a, b):
    for var in ("x", "y"):
        assert (a * b).derivative(var) == a.derivative(var) * b + a * b.derivative(var)


@given(bipolys(), bipolys())
def test_truncation_is_a_ring_map(a, b):
    n = 5
    prod = TruncSeries(a, n) * TruncSeries(b, n)
    assert prod.precision >= n
    assert prod.body == (a.truncate(n) * b.truncate(n)).truncate(prod.precision)
    assert (TruncSeries(a, n) + TruncSeries(b, n)).body == (a + b).truncate(n)


@given(bipolys())
def test_extension_lift_is_faithful(a):
    K = QQ.adjoin([-2, 0, 1], "a")
    r = K.generator()
    lifted = a.lift(K)
    assert (lifted * r * r).simplify_field() == a * 2


def test_unknown_operations_raise_algebra_errors():
    with pytest.raises(AlgebraError):
        uni_factor(UniPoly([]))
