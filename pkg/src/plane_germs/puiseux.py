"""Newton-Puiseux expansion with exact algebraic coefficients.

Branches are computed with rational (Duval style) Newton steps.  An edge of
inclination m/q is handled by the substitution

    X = xi^v X1^q,   Y = X1^m (xi^u + Y1),   u q - v m = 1,

where xi runs over the roots of the edge polynomial, one per irreducible
factor.  Conjugate branches therefore share one record whose conjugacy is the
product of the factor degrees.  Once a simple root is reached the remaining
series is produced on demand by Newton iteration.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from flint import fmpq, fmpq_poly

from .bipoly import CTX2, CTX3, BiPoly, reduce3
from .newton import hull_from_points
from .numbers import (QQ, AlgebraError, describe_scalar, join_towers,
                      relative_trace, scalar_is_zero, simplify, tower_of)
from .series import Series, evaluate_bipoly
from .upoly import UniPoly, uni_factor

# -- expansion state -------------------------------------------------------


class _Tail:
    """Lazily extended y(t) = A(t) + c t^s Y1(t), with Y1 solving G1(t, Y1) = 0."""

    def __init__(self, K, A, c, s, G1):
        self.K = K
        self.A = A            # Series, exact
        self.c = c
        self.s = s
        self.G1 = G1          # BiPoly with a simple root at Y1 = 0, or None
        self._Y1 = Series(K, [], 1) if G1 is not None else None
        self._GY = G1.derivative("y") if G1 is not None else None

    def _solve(self, n):
        """Y1 mod t^n by Newton iteration."""
        Y = self._Y1
        if Y.prec >= n:
            return Y.truncate(n)
        t = Series.t(self.K)
        k = Y.prec
        while k < n:
            k = min(2 * k, n)
            G = self.G1.filter_terms(lambda i, j: i < k)
            GY = self._GY.filter_terms(lambda i, j: i < k)
            Yx = Series(self.K, Y.c, None)
            num = evaluate_bipoly(G, t, Yx, k)
            den = evaluate_bipoly(GY, t, Yx, k)
            Y = (Yx - num * den.inverse(k)).truncate(k)
        self._Y1 = Y
        return Y

    def series(self, n):
        """y(t) mod t^n."""
        if self.G1 is None:
            return Series(self.K, self.A.c, n)
        need = n - self.s
        if need <= 0:
            return Series(self.K, self.A.c, n)
        Y1 = self._solve(need)
        rest = Y1.shift(self.s).scale(self.c)
        return (Series(self.K, self.A.c, n) + rest).truncate(n)


@dataclass
class Branch:
    """One irreducible analytic branch, up to Galois conjugation.

    In the branch's own chart the parametrization is X = gamma t^m and
    Y = tail(t).  For a non-swapped branch (X, Y) = (x, y); for a swapped one
    (X, Y) = (y, x).  ``gamma`` is 1 unless the rational Newton steps produce
    a constant in front of t^m.
    """

    m: int
    tail: Series
    multiplicity: int = 1
    swapped: bool = False
    conjugacy: int = 1
    gamma: object = fmpq(1)
    base: object = QQ
    separation: int = 0
    _gen: _Tail = field(default=None, repr=False, compare=False)

    @property
    def K(self):
        return self.tail.K

    @staticmethod
    def from_series(m, coeffs, K=None, gamma=1, swapped=False, multiplicity=1):
        """An explicit exact branch X = gamma t^m, Y = sum coeffs[e] t^e."""
        if isinstance(coeffs, dict):
            n = max(coeffs) + 1 if coeffs else 0
            coeffs = [coeffs.get(i, 0) for i in range(n)]
        tail = Series.from_list(list(coeffs) or [0], None, K)
        K = join_towers(tail.K, tower_of(gamma))
        tail = tail.lift(K)
        gen = _Tail(K, tail, 1, 0, None)
        return Branch(m, tail, multiplicity, swapped, 1, gamma, QQ, max(len(coeffs) - 1, 0), gen)

    def y_series(self, n):
        """The chart's Y(t) mod t^n."""
        if self._gen is None:
            if self.tail.prec is not None and self.tail.prec < n:
                raise AlgebraError("branch tail known only to t^%d" % self.tail.prec)
            return self.tail.truncate(n)
        return self._gen.series(n)

    def extend(self, n):
        """Recompute the stored tail to precision n."""
        self.tail = self.y_series(n)
        return self

    def x_series(self, n):
        return Series(self.K, [self.K.zero()] * self.m + [self.K.lift(self.gamma)], n)

    def param(self, n):
        """(x(t), y(t)) mod t^n in the input coordinates."""
        X, Y = self.x_series(n), self.y_series(n)
        return (Y, X) if self.swapped else (X, Y)

    def order_of(self, g, limit):
        """ord_t g(param(t)), or None if g vanishes to t^limit."""
        x, y = self.param(limit)
        val = evaluate_bipoly(g.lift(join_towers(g.K, self.K)), x, y, limit).valuation()
        return val

    def is_smooth(self):
        return self.m == 1

    def tail_terms(self):
        return [(i, c) for i, c in enumerate(self.tail.c) if not scalar_is_zero(c)]

    def to_json(self):
        return {
            "m": self.m,
            "tail": [[i, describe_scalar(c)] for i, c in self.tail_terms()],
            "precision": self.tail.prec,
            "multiplicity": self.multiplicity,
            "swapped": self.swapped,
            "conjugacy": self.conjugacy,
            "x_coefficient": describe_scalar(self.gamma),
        }

    def __str__(self):
        from .numbers import scalar_str
        X, Y = ("y", "x") if self.swapped else ("x", "y")
        g = "" if self.gamma == 1 else scalar_str(self.gamma) + "*"
        terms = " + ".join(_term(c, i) for i, c in self.tail_terms()) or "0"
        return "%s = %st^%d, %s = %s + O(t^%s)  [mult %d, conj %d]" % (
            X, g, self.m, Y, terms, self.tail.prec, self.multiplicity, self.conjugacy)


def _term(c, i):
    from .numbers import scalar_str
    s = scalar_str(c)
    if s == "1":
        return "t^%d" % i
    if s == "-1":
        return "-t^%d" % i
    return "%s*t^%d" % (s, i)


# -- Newton steps ----------------------------------------------------------

@dataclass
class _State:
    K: object
    gamma: object
    e: int
    A: Series
    c: object
    s: int
    conj: int
    depth: int = 0


def _bezout(m, q):
    """(u, v) with u*q - v*m = 1, 1 <= u <= m."""
    if m == 1:
        return 1, q - 1
    u = pow(q, -1, m)
    if u == 0:
        u = m
    v = (u * q - 1) // m
    return u, v


def _edge_poly(G, edge, m, q):
    """phi(Z) = sum_k a(i0 - m k, j0 + q k) Z^k over the edge, (i0, j0) bottom right."""
    i0, j0 = edge.end
    S = (edge.start[1] - j0) // q
    coeffs = [G.coefficient(i0 - m * k, j0 + q * k) for k in range(S + 1)]
    return UniPoly(coeffs)


def _substitute(G, xi, u, v, m, q, l, K):
    """G(xi^v X^q, X^m (xi^u + Y)) / X^l over K."""
    G = G.lift(K)
    xi = K.lift(xi)
    a = xi ** v
    b = xi ** u
    fx = BiPoly.monomial(q, 0, a, K)
    fy = BiPoly.monomial(m, 0, b, K) + BiPoly.monomial(m, 1, 1, K)
    return G.compose(fx, fy).divide_monomial(l, 0)


def _y_order_at_zero(G):
    return min(j for (i, j) in G.support() if i == 0)


def _advance(st, xi, u, v, m, q, K, deg):
    xi = K.lift(xi)
    gamma = K.lift(st.gamma) * xi ** (v * st.e)
    A = st.A.lift(K)
    # A(xi^v X^q)
    newA = [K.zero()] * (max(len(A.c) - 1, 0) * q + 1) if A.c else []
    for i, a in enumerate(A.c):
        if not scalar_is_zero(a):
            newA[i * q] = a * xi ** (v * i)
    top = q * st.s + m
    cs = K.lift(st.c) * xi ** (v * st.s)
    if len(newA) <= top:
        newA.extend([K.zero()] * (top + 1 - len(newA)))
    newA[top] = newA[top] + cs * xi ** u
    return _State(K, simplify(gamma), q * st.e, Series(K, newA, None), simplify(cs), top,
                  st.conj * deg, st.depth + 1)


def _descend(st, G, keep_edge, out, base):
    """Collect the branches of G(X, Y) = 0 with Y -> 0, given the state map."""
    if G.coefficient(0, 0) != 0:
        return
    # exact branch Y = 0
    if all(j >= 1 for (_, j) in G.support()):
        out.append((st, None))
        G = G.divide_monomial(0, 1)
        if G.coefficient(0, 0) != 0:
            return
    diagram = hull_from_points(G.support())
    for edge in diagram.compact_edges:
        if keep_edge is not None and not keep_edge(edge):
            continue
        incl = edge.inclination
        m, q = int(incl.p), int(incl.q)
        u, v = _bezout(m, q)
        l = q * edge.end[0] + m * edge.end[1]
        phi = _edge_poly(G, edge, m, q)
        for psi, mult in uni_factor(phi.monic(), st.K):
            if psi.degree == 1:
                K1 = st.K
                xi = simplify(-psi.coeffs[0] / psi.coeffs[1])
            else:
                K1 = st.K.adjoin([st.K.lift(c) for c in psi.coeffs])
                xi = K1.generator()
            G1 = _substitute(G, xi, u, v, m, q, l, K1)
            st1 = _advance(st, xi, u, v, m, q, K1, psi.degree)
            if mult == 1 and _y_order_at_zero(G1) == 1:
                out.append((st1, G1))
            else:
                _descend(st1, G1, None, out, base)


def _squarefree_factors(f):
    """[(factor, multiplicity)] of a BiPoly: full Q-factorization, else trusted."""
    if f.K.depth == 0:
        _, facs = f.p.factor()
        return [(BiPoly(QQ, g), int(e)) for g, e in facs]
    return [(f, 1)]


def _make_branch(st, G1, swapped, mult, base, terms):
    gen = _Tail(st.K, st.A, st.c, st.s, G1)
    sep = st.s
    n = max(terms, sep + 1)
    tail = gen.series(n) if G1 is not None else Series(st.K, st.A.c, None)
    b = Branch(st.e, tail, mult, swapped, st.conj, st.gamma, base, sep, gen)
    if G1 is not None:
        b.tail = gen.series(n)
    return b


def puiseux_expand(f, terms=8):
    """All branches of f at the origin, each with its multiplicity."""
    if f.is_zero():
        raise AlgebraError("Puiseux expansion of the zero germ")
    if f.coefficient(0, 0) != 0:
        raise AlgebraError("germ does not pass through the origin")
    base = f.K
    branches = []
    for g, mult in _squarefree_factors(f):
        if g.coefficient(0, 0) != 0:
            continue
        sup = g.support()
        if sup == [(1, 0)]:
            branches.append(Branch(1, Series(base, [], None), mult, True, 1, fmpq(1), base, 0,
                                   _Tail(base, Series(base, [], None), 1, 0, None)))
            continue
        if sup == [(0, 1)]:
            branches.append(Branch(1, Series(base, [], None), mult, False, 1, fmpq(1), base, 0,
                                   _Tail(base, Series(base, [], None), 1, 0, None)))
            continue
        for swapped in (False, True):
            G = g.swap() if swapped else g
            if swapped:
                keep = lambda e: e.inclination > 1  # noqa: E731
            else:
                keep = lambda e: e.inclination >= 1  # noqa: E731
            st = _State(base, fmpq(1), 1, Series(base, [], None), fmpq(1), 0, 1)
            found = []
            _descend(st, G, keep, found, base)
            for st1, G1 in found:
                branches.append(_make_branch(st1, G1, swapped, mult, base, terms))
    branches.sort(key=_branch_sort_key)
    for b in branches:
        if b.tail.prec is not None and b.tail.prec < terms:
            b.extend(terms)
    return branches


def _branch_sort_key(b):
    return (b.swapped, b.m, b.conjugacy, [(i, str(simplify(c))) for i, c in b.tail_terms()[:4]])


# -- characteristic data ---------------------------------------------------

@dataclass(frozen=True)
class CharSequence:
    beta: tuple
    e: tuple

    def __str__(self):
        return "(%d;%s)" % (self.beta[0], ",".join(str(b) for b in self.beta[1:]))


@dataclass(frozen=True)
class Semigroup:
    generators: tuple

    def contains(self, n):
        """Membership by a small dynamic program."""
        reach = [False] * (n + 1)
        reach[0] = True
        for k in range(1, n + 1):
            reach[k] = any(g <= k and reach[k - g] for g in self.generators)
        return reach[n]

    def conductor(self):
        gens = self.generators
        if gens[0] == 1:
            return 0
        n = gens[0] * gens[-1] * 2
        last_gap = -1
        for k in range(n):
            if not self.contains(k):
                last_gap = k
        return last_gap + 1

    def __str__(self):
        return "<" + ",".join(str(g) for g in self.generators) + ">"


def characteristic_data(b):
    """Characteristic exponents of a branch from its parametrization."""
    m = b.m
    beta = [m]
    es = [m]
    if m == 1:
        return CharSequence((1,), (1,))
    n = max(2 * m + 2, (b.tail.prec or 0))
    while True:
        y = b.y_series(n)
        e = es[-1]
        for i, c in enumerate(y.c):
            if i <= beta[-1] or scalar_is_zero(c):
                continue
            if i % e:
                beta.append(i)
                e = gcd(e, i)
                es.append(e)
                if e == 1:
                    return CharSequence(tuple(beta), tuple(es))
        if b._gen is None or b._gen.G1 is None:
            raise AlgebraError("parametrization is not primitive")
        n *= 2


def semigroup(b):
    """Minimal generators of the value semigroup of a branch."""
    cs = b if isinstance(b, CharSequence) else characteristic_data(b)
    beta, es = cs.beta, cs.e
    gens = [beta[0]]
    if len(beta) == 1:
        return Semigroup((beta[0],))
    gens.append(beta[1])
    for q in range(1, len(beta) - 1):
        gens.append(es[q - 1] // es[q] * gens[q] + beta[q + 1] - beta[q])
    return Semigroup(tuple(gens))


# -- implicitization -------------------------------------------------------

@dataclass
class ImplicitEquation:
    """Monic polynomial in the chart's Y with coefficients known mod X^precision.

    ``poly`` is written in the input coordinates (x, y); for a swapped
    branch it is monic in x with coefficients series in y.
    """

    poly: BiPoly
    precision: int
    swapped: bool
    degree: int

    def __str__(self):
        var = "y" if self.swapped else "x"
        return "%s + O(%s^%d)" % (self.poly.to_str(), var, self.precision)


def _newton_identities(ps, d, K, P):
    """Elementary symmetric functions (coefficient lists mod X^P) from power sums."""
    es = [None] * (d + 1)
    es[0] = [K.one()]
    for k in range(1, d + 1):
        acc = None
        for i in range(1, k + 1):
            term = _pmul(es[k - i], ps[i], P)
            if (i - 1) % 2:
                term = [-a for a in term]
            acc = term if acc is None else _padd(acc, term)
        es[k] = [a / k for a in acc]
    return es


def _padd(a, b):
    n = max(len(a), len(b))
    return [(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)]


def _pmul(a, b, n):
    out = [0] * min(len(a) + len(b) - 1, n)
    for i, x in enumerate(a):
        if scalar_is_zero(x):
            continue
        for j, y in enumerate(b):
            if i + j >= n:
                break
            out[i + j] = out[i + j] + x * y
    return out


def monic_from_roots(m, gamma, Y, base, P, trace=True):
    """Monic polynomial in Y whose roots are Y(t) over X = gamma t^m.

    The roots are the m series Y(zeta tau), tau^m = X/gamma, together with
    their Galois conjugates over ``base`` when ``trace`` is set.  ``Y`` must
    be known mod t^(m P); coefficients are returned mod X^P as a BiPoly in
    (X, Y) over ``base`` (or over Y's tower without ``trace``).
    """
    K = Y.K
    d = m * (_relative_degree(K, base) if trace else 1)
    ginv = 1 / K.lift(gamma)
    gpow = [K.one()]
    for _ in range(P):
        gpow.append(gpow[-1] * ginv)
    ps = [None]
    Yk = Series(K, [K.one()], m * P)
    Y = Y.truncate(m * P)
    for k in range(1, d + 1):
        Yk = (Yk * Y).truncate(m * P)
        coeffs = []
        for n in range(P):
            c = Yk.c[n * m] * gpow[n] * m if n * m < len(Yk.c) else K.zero()
            if trace:
                c = relative_trace(K.lift(c), base)
            coeffs.append(simplify(c))
        ps.append(coeffs)
    F = base if trace else K
    es = _newton_identities(ps, d, F, P)
    terms = {}
    for k in range(d + 1):
        sign = -1 if k % 2 else 1
        for n, c in enumerate(es[k]):
            if not scalar_is_zero(c):
                terms[(n, d - k)] = sign * c
    return BiPoly.from_dict(terms, F)


def _relative_degree(K, base):
    return K.degree // base.degree


def implicitize(b, precision=8, trace=True):
    """Monic implicit equation of the branch (with its conjugates if ``trace``)."""
    P = precision
    F = b.base if trace else b.K
    poly = monic_from_roots(b.m, b.gamma, b.y_series(b.m * P), F, P, trace)
    d = b.m * (_relative_degree(b.K, F))
    if b.swapped:
        poly = poly.swap()
    return ImplicitEquation(poly.simplify_field(), P, b.swapped, d)
