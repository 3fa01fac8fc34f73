import math

import pytest
from flint import fmpq
from hypothesis import given
from hypothesis import strategies as st

from plane_germs.bipoly import BiPoly
from plane_germs.numbers import AlgebraError, CapacityError, tower_degree_cap
from plane_germs.puiseux import Branch, characteristic_data, implicitize, puiseux_expand, semigroup
from plane_germs.series import evaluate_bipoly

from conftest import xy
from strategies import nonzero_rationals


def _vanishes_on(f, b, n=12):
    X, Y = b.param(n)
    return evaluate_bipoly(f.lift(b.K), X, Y, n).valuation() is None


def test_cusp_branch():
    (b,) = puiseux_expand(xy("y^2 - x^3"))
    assert (b.m, b.multiplicity, b.conjugacy, b.swapped) == (2, 1, 1, False)
    assert [(i, c) for i, c in b.tail_terms()] == [(3, 1)]


def test_axes():
    bs = puiseux_expand(xy("x*y"))
    assert sorted(b.swapped for b in bs) == [False, True]
    assert all(b.m == 1 and not b.tail_terms() for b in bs)


def test_node_with_binomial_tails():
    bs = puiseux_expand(xy("y^2 - x^2 - x^3"), terms=5)
    tails = sorted([[c for _, c in b.tail_terms()][:4] for b in bs])
    half = [1, fmpq(1, 2), fmpq(-1, 8), fmpq(1, 16)]
    assert tails == sorted([half, [-c for c in half]])
    for b in bs:
        assert _vanishes_on(xy("y^2 - x^2 - x^3"), b, 8)


def test_multiplicities_of_repeated_factors():
    bs = puiseux_expand(xy("x*(y^2 - x^3)^2"))
    assert sorted((b.m, b.multiplicity) for b in bs) == [(1, 1), (2, 2)]


def test_conjugate_branches_over_extension():
    (b,) = puiseux_expand(xy("y^2 - 2*x^2"))
    assert b.conjugacy == 2 and b.K.degree == 2
    assert _vanishes_on(xy("y^2 - 2*x^2"), b)


def test_tower_cap_is_enforced():
    with tower_degree_cap(1):
        with pytest.raises(CapacityError):
            puiseux_expand(xy("y^2 - 2*x^2"))


def test_rejects_units_and_zero():
    with pytest.raises(AlgebraError):
        puiseux_expand(xy("1 + x"))
    with pytest.raises(AlgebraError):
        puiseux_expand(BiPoly.zero())


def test_characteristic_sequences():
    cusp = puiseux_expand(xy("y^2 - x^3"))[0]
    assert (characteristic_data(cusp).beta, characteristic_data(cusp).e) == ((2, 3), (2, 1))
    smooth = puiseux_expand(xy("y - x^2"))[0]
    assert characteristic_data(smooth).beta == (1,)
    b = Branch.from_series(4, {6: 1, 7: 1})
    cs = characteristic_data(b)
    assert (cs.beta, cs.e) == ((4, 6, 7), (4, 2, 1))


def test_semigroups():
    assert semigroup(puiseux_expand(xy("y^2 - x^3"))[0]).generators == (2, 3)
    assert semigroup(puiseux_expand(xy("y^2 - x^5"))[0]).generators == (2, 5)
    assert semigroup(Branch.from_series(4, {6: 1, 7: 1})).generators == (4, 6, 13)


def test_semigroup_conductor():
    assert semigroup(puiseux_expand(xy("y^2 - x^3"))[0]).conductor() == 2
    assert semigroup(Branch.from_series(4, {6: 1, 7: 1})).conductor() == 16


def test_implicitize_goldens():
    assert implicitize(Branch.from_series(2, {3: 1}), 6).poly == xy("y^2 - x^3")
    assert implicitize(Branch.from_series(1, {1: 1, 2: 1}), 5).poly == xy("y - x - x^2")
    assert implicitize(Branch.from_series(1, {2: fmpq(-3, 2)}), 5).poly == xy("y + (3/2)*x^2")


def test_implicitize_swapped_chart():
    (b,) = puiseux_expand(xy("y^2 - x"))
    eq = implicitize(b, 6)
    assert b.swapped and eq.swapped
    assert eq.poly == xy("x - y^2")


def _x_truncate(p, n):
    return p.filter_terms(lambda i, j: i < n)


@st.composite
def weierstrass_branches(draw):
    """y^n + c x^k + terms above the edge with k > n, gcd(n, k) = 1: irreducible,
    monic in y, and parametrized over the x-chart."""
    n = draw(st.integers(1, 3))
    k = draw(st.integers(n + 1, 6).filter(lambda k: math.gcd(n, k) == 1))
    f = BiPoly.monomial(0, n) + BiPoly.monomial(k, 0, draw(nonzero_rationals))
    for _ in range(draw(st.integers(0, 2))):
        j = draw(st.integers(0, n - 1))
        i = draw(st.integers(0, 6))
        if fmpq(i, k) + fmpq(j, n) > 1:
            f = f + BiPoly.monomial(i, j, draw(nonzero_rationals))
    return f


@given(weierstrass_branches(), st.sampled_from([xy("1"), xy("1 + x"), xy("2 - y + x*y")]))
def test_expansion_implicitization_roundtrip(f, unit):
    bs = puiseux_expand(f * unit, terms=8)
    assert len(bs) == 1
    P = 6
    eq = implicitize(bs[0], P)
    assert _x_truncate(eq.poly, P) == _x_truncate(f, P)


@given(weierstrass_branches())
def test_branches_satisfy_their_germ(f):
    for b in puiseux_expand(f, terms=6):
        X, Y = b.param(10)
        assert evaluate_bipoly(f.lift(b.K), X, Y, 10).valuation() is None
