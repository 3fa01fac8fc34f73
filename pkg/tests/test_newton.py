import pytest
from flint import fmpq
from hypothesis import assume, given
from hypothesis import strategies as st

from plane_germs.bipoly import BiPoly, TruncSeries
from plane_germs.newton import (PrecisionError, factor_edge, hull_from_points,
                                initial_newton_polynomial, newton_diagram, rescale_equal,
                                weighted_initial_form)
from plane_germs.numbers import minimal_polynomial

from conftest import uv, xy
from strategies import bipolys, germs, nonzero_rationals, units

weights = st.tuples(st.integers(1, 5), st.integers(1, 5)).filter(lambda w: __import__("math").gcd(*w) == 1)


# -- diagrams ---------------------------------------------------------------

def test_cusp_with_higher_term():
    d = newton_diagram(xy("y^2 - x^3 + x^4"))
    assert d.vertices == ((0, 2), (3, 0))
    assert [e.inclination for e in d.compact_edges] == [fmpq(3, 2)]


def test_two_vertex_edge():
    d = newton_diagram(xy("x^2*y + x*y^3"))
    assert d.vertices == ((1, 3), (2, 1))
    assert d.compact_edges[0].inclination == fmpq(1, 2)


def test_unit_diagram():
    d = newton_diagram(BiPoly.const(5))
    assert d.vertices == ((0, 0),) and d.compact_edges == ()
    assert d.is_empty()


def test_monomial_diagram():
    d = newton_diagram(xy("x*y"))
    assert d.vertices == ((1, 1),) and not d.compact_edges


def test_edge_weight_matches_inclination():
    e = newton_diagram(uv("v + u^3")).compact_edges[0]
    assert e.inclination == 3 and e.weight() == (1, 3)


def test_truncated_series_precision_guard():
    # y^2 - x^3 known only below total degree 3 cannot certify the bottom vertex
    with pytest.raises(PrecisionError):
        newton_diagram(TruncSeries(xy("y^2 - x^3"), 3))
    d = newton_diagram(TruncSeries(xy("y^2 - x^3 + x*y^5"), 4))
    assert d.vertices == ((0, 2), (3, 0))


# -- initial forms ----------------------------------------------------------

def test_initial_drops_interior_terms():
    assert initial_newton_polynomial(xy("y^2 - x^3 + x^4")) == xy("y^2 - x^3")
    assert initial_newton_polynomial(xy("x^2*y + x*y^3 + x^5*y^3")) == xy("x^2*y + x*y^3")
    assert initial_newton_polynomial(xy("x^3")) == xy("x^3")


def test_weighted_initial_forms():
    assert weighted_initial_form(uv("v^2 - u^3 + u^2*v^2"), (2, 3)) == uv("v^2 - u^3")
    assert weighted_initial_form(uv("u + v"), (1, 2)) == uv("u")


def test_weighted_initial_rejects_bad_weight():
    with pytest.raises(ValueError):
        weighted_initial_form(uv("u + v"), (2, 4))


def test_full_product_is_not_the_initial_polynomial():
    # the cross term x*y^2 of in(f)*in(g) lies above the diagram of fg
    f, g = xy("x + y"), xy("x + y^2")
    assert initial_newton_polynomial(f * g) != initial_newton_polynomial(f) * initial_newton_polynomial(g)
    assert initial_newton_polynomial(f * g) == xy("x^2 + x*y + y^3")


# -- edge factorization -----------------------------------------------------

def test_factor_edge_cusp():
    F = factor_edge(uv("v^2 - u^3"), (2, 3))
    assert (F.C, F.nu0, F.nu_last) == (1, 0, 0)
    assert F.all_roots() == [(1, 1)]


def test_factor_edge_with_axis_factor():
    F = factor_edge(uv("u*(v^2 - u^3)^2"), (2, 3))
    assert (F.nu0, F.nu_last) == (1, 0)
    assert F.all_roots() == [(1, 2)]


def test_factor_edge_with_v_factor():
    F = factor_edge(uv("v^3 + u*v"), (2, 1))
    assert F.nu_last == 1
    assert F.all_roots() == [(-1, 1)]


def test_factor_edge_irrational_root():
    F = factor_edge(uv("v^2 - 2*u^2"), (1, 1))
    (r,) = F.roots
    assert r.conjugates == 2
    assert list(minimal_polynomial(r.t).coeffs()) == [-2, 0, 1]
    assert F.reconstruct() == uv("v^2 - 2*u^2")


@given(bipolys(max_degree=6, max_terms=5, nonzero=True), weights)
def test_factor_edge_reconstruction(p, w):
    q = weighted_initial_form(p, w)
    assert factor_edge(q, w).reconstruct() == q


# -- rescaling --------------------------------------------------------------

def test_rescale_solvable():
    r = rescale_equal(uv("v + u^3"), uv("2*v + 54*u^3"))
    assert r.solvable
    a, b = r.witness
    assert b == 2 and a ** 3 == 54


def test_rescale_obstruction():
    r = rescale_equal(uv("u + v + u*v"), uv("u + v + 2*u*v"))
    assert not r.solvable
    assert r.to_json()["obstruction"]["text"] == "(1,0)+(0,1)-(1,1)=0"


def test_rescale_identity():
    p = uv("v^2 - u^3 + u*v")
    assert rescale_equal(p, p).witness == (1, 1)


# -- properties -------------------------------------------------------------

def _minkowski(d1, d2):
    return hull_from_points({(a + c, b + e) for a, b in d1.vertices for c, e in d2.vertices}).vertices


@given(germs(), germs())
def test_minkowski_sum(f, g):
    assert newton_diagram(f * g).vertices == _minkowski(newton_diagram(f), newton_diagram(g))


@given(germs(), germs())
def test_initial_polynomial_multiplicative_on_the_diagram(f, g):
    d = newton_diagram(f * g)
    prod = initial_newton_polynomial(f) * initial_newton_polynomial(g)
    assert initial_newton_polynomial(f * g) == prod.filter_terms(lambda i, j: d.on_boundary((i, j)))


@given(germs(), germs())
def test_initial_polynomial_multiplicative_edgewise(f, g):
    for e in newton_diagram(f * g).compact_edges:
        w = e.weight()
        lhs = weighted_initial_form(initial_newton_polynomial(f * g), w)
        rhs = weighted_initial_form(initial_newton_polynomial(f), w) * \
            weighted_initial_form(initial_newton_polynomial(g), w)
        assert lhs == rhs


@given(bipolys(nonzero=True), bipolys(nonzero=True), weights)
def test_weighted_initial_multiplicative(f, g, w):
    assert weighted_initial_form(f * g, w) == weighted_initial_form(f, w) * weighted_initial_form(g, w)


@given(germs(), units(), nonzero_rationals)
def test_unit_invariance_of_initial(f, u, c):
    u = u * (1 / u.coefficient(0, 0))
    assert initial_newton_polynomial(f * u) == initial_newton_polynomial(f)
    assert initial_newton_polynomial(f * c) == initial_newton_polynomial(f) * c


@given(bipolys(max_degree=4, max_terms=4, nonzero=True),
       st.lists(st.tuples(nonzero_rationals, nonzero_rationals), min_size=2, max_size=2))
def test_rescale_equal_is_an_equivalence(p, ab):
    (a1, b1), (a2, b2) = ab
    q = p.rescale(a1, b1)
    r = q.rescale(a2, b2)
    assert rescale_equal(p, p).solvable
    for s, t in ((p, q), (q, r), (p, r)):
        assert rescale_equal(s, t).solvable
        assert rescale_equal(t, s).solvable
    w = rescale_equal(p, r).witness
    if w is not None:
        assert p.rescale(*w) == r


@given(bipolys(max_degree=3, max_terms=3, nonzero=True), nonzero_rationals)
def test_rescale_rejects_scalar_multiples_off_lattice(p, c):
    assume(c != 1 and p.coefficient(0, 0) != 0)
    assert not rescale_equal(p, p * c).solvable


def test_rescale_up_to_constant():
    p, q = uv("u^2 + u*v + v^3"), uv("5*u^2 + u*v + v^3")
    assert not rescale_equal(p, q).solvable
    r = rescale_equal(p, q, up_to_constant=True)
    a, b, c = r.witness
    assert p.rescale(a, b) * c == q


def test_rescale_up_to_constant_obstruction():
    # the ratio character must be constant along every relation of the shifted support
    r = rescale_equal(uv("u + u^2 + u^3"), uv("u + 2*u^2 + u^3"), up_to_constant=True)
    assert not r.solvable
    assert r.to_json()["obstruction"]["text"] == "2(2,0)-(3,0)-(1,0)=0"


@given(bipolys(max_degree=4, max_terms=4, nonzero=True), nonzero_rationals, nonzero_rationals,
       nonzero_rationals)
def test_rescale_up_to_constant_finds_witness(p, a, b, c):
    q = p.rescale(a, b) * c
    r = rescale_equal(p, q, up_to_constant=True)
    assert r.solvable
    if r.witness is not None:
        a2, b2, c2 = r.witness
        assert (p.rescale(a2, b2) * c2).simplify_field() == q
