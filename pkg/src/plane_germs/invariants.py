"""Intersection multiplicities, Milnor numbers and equisingularity types."""

from __future__ import annotations

import contextlib
import contextvars
import functools
from dataclasses import dataclass, field

from flint import acb, fmpq

from .bipoly import CTX2, CTX3, BiPoly, TruncSeries, reduce3
from .numbers import (QQ, AlgebraError, _precision, simplify, sorted_roots)
from .puiseux import (Branch, characteristic_data, implicitize,
                      puiseux_expand, semigroup)
from .series import evaluate_bipoly
from .upoly import UniPoly, poly_gcd, uni_factor


class MethodDisagreement(AlgebraError):
    """Two independent computations of one quantity gave different answers."""


class NonIsolatedError(AlgebraError):
    """The partial derivatives share a component through the origin."""


@functools.total_ordering
class IntersectionNumber:
    """A non-negative integer or infinity (shared component)."""

    __slots__ = ("value",)

    def __init__(self, value):
        self.value = None if value is None else int(value)

    @property
    def infinite(self):
        return self.value is None

    def __int__(self):
        if self.value is None:
            raise AlgebraError("infinite intersection number")
        return self.value

    def __index__(self):
        return int(self)

    def __eq__(self, other):
        if isinstance(other, IntersectionNumber):
            return self.value == other.value
        if isinstance(other, int):
            return self.value == other
        if other == "inf" or other == float("inf"):
            return self.value is None
        return NotImplemented

    def __lt__(self, other):
        o = other.value if isinstance(other, IntersectionNumber) else other
        if self.value is None:
            return False
        if o is None or o == float("inf"):
            return True
        return self.value < o

    def __add__(self, other):
        o = other.value if isinstance(other, IntersectionNumber) else other
        if self.value is None or o is None:
            return INF
        return IntersectionNumber(self.value + o)

    __radd__ = __add__

    def __mul__(self, k):
        if self.value is None:
            return INF if k else IntersectionNumber(0)
        return IntersectionNumber(self.value * int(k))

    __rmul__ = __mul__

    def __hash__(self):
        return hash(self.value)

    def __repr__(self):
        return "IntersectionNumber(%s)" % self

    def __str__(self):
        return "inf" if self.value is None else str(self.value)

    def to_json(self):
        return "inf" if self.value is None else self.value


INF = IntersectionNumber(None)


# -- helpers ---------------------------------------------------------------

def germ_order(f):
    """Multiplicity (lowest total degree) of a germ."""
    o = f.order()
    if o is None:
        raise AlgebraError("order of the zero germ")
    return o


def shear(f, c):
    """f(x + c*y, y)."""
    if c == 0:
        return f
    K = f.K
    return f.compose(BiPoly.x(K) + BiPoly.y(K) * c, BiPoly.y(K))


def _univariate_at_x0(f):
    """f(0, y) as a UniPoly over f's tower."""
    d = {}
    for (i, j), c in f.coeffs().items():
        if i == 0:
            d[j] = c
    n = max(d) + 1 if d else 0
    return UniPoly([d.get(j, f.K.zero()) for j in range(n)])


def _y_degree_is_total(f):
    """Leading coefficient in y is a nonzero constant."""
    top = f.degree_in("y")
    return all(i == 0 for (i, j) in f.support() if j == top) and top == f.total_degree()


def _shear_ok(F, G):
    if not (_y_degree_is_total(F) and _y_degree_is_total(G)):
        return False
    a, b = _univariate_at_x0(F), _univariate_at_x0(G)
    if a.is_zero() or b.is_zero():
        return False
    h = poly_gcd(a, b)
    return all(c == 0 for c in h.coeffs[:-1])


_shear_start = contextvars.ContextVar("shear_start", default=0)


@contextlib.contextmanager
def shear_seed(n):
    """Start the shear search c = n, n+1, ... instead of c = 0."""
    token = _shear_start.set(int(n))
    try:
        yield
    finally:
        _shear_start.reset(token)


def generic_shear(f, g, limit=64):
    """First c >= seed making both y-general with no common point on x = 0 but 0."""
    start = _shear_start.get()
    for c in range(start, start + limit):
        F, G = shear(f, c), shear(g, c)
        if _shear_ok(F, G):
            return c, F, G
    raise AlgebraError("shear sequence exhausted after %d steps" % limit)


def _x_order(p_dict):
    return min((k[0] for k in p_dict), default=None)


def _resultant_order(F, G):
    """ord_x Res_y(F, G); None if the resultant vanishes identically."""
    K = F.K
    if K.depth == 0:
        R = F.p.resultant(G.p, "y")
        if R.is_zero():
            return None
        return _x_order(R.to_dict())
    R = F.p.resultant(G.p, "y")
    R = reduce3(R, K)
    if R.is_zero():
        return None
    return _x_order(R.to_dict())


def _through_origin(p):
    return p.to_dict().get((0, 0), 0) == 0 if p.context().nvars() == 2 else None


# -- intersection multiplicity ---------------------------------------------

def intersection_resultant(f, g):
    """i0 via the x-order of a resultant after a deterministic shear."""
    _check_pair(f, g)
    if f.K.depth == 0 and g.K.depth == 0:
        h = f.p.gcd(g.p)
        if not h.is_constant():
            if h.to_dict().get((0, 0), 0) == 0:
                return INF
            f = BiPoly(QQ, f.p / h)
            g = BiPoly(QQ, g.p / h)
    if f.coefficient(0, 0) != 0 or g.coefficient(0, 0) != 0:
        return IntersectionNumber(0)
    K = _join(f, g)
    f, g = f.lift(K), g.lift(K)
    try:
        c, F, G = generic_shear(f, g)
    except AlgebraError:
        if K.depth == 0:
            raise
        # over an extension a common factor away from 0 is not removed;
        # the branch sum at the origin is unaffected by it
        return intersection_zeuthen(f, g)
    n = _resultant_order(F, G)
    if n is None:
        if K.depth == 0:
            raise AlgebraError("resultant vanished after removing the common factor")  # pragma: no cover
        return intersection_zeuthen(f, g)
    return IntersectionNumber(n)


def _join(f, g):
    from .numbers import join_towers
    return join_towers(f.K, g.K)


def _check_pair(f, g):
    if f.is_zero() or g.is_zero():
        raise AlgebraError("intersection with the zero germ")


def _bezout_bound(f, g):
    return f.total_degree() * g.total_degree() + 1


def order_on_branch(f, b, start=16, limit=None):
    """ord_t f(b(t)); None once it exceeds ``limit``."""
    n = start
    while True:
        if limit is not None and n > limit:
            n = limit + 1
        x, y = b.param(n)
        v = evaluate_bipoly(f.lift(_branch_join(f, b)), x, y, n).valuation()
        if v is not None:
            return v
        if limit is not None and n > limit:
            return None
        n *= 2


def _branch_join(f, b):
    from .numbers import join_towers
    return join_towers(f.K, b.K)


def intersection_zeuthen(f, g, branches=None):
    """i0 as a sum over the branches of g of multiplicity * ord_t f(param)."""
    _check_pair(f, g)
    if f.coefficient(0, 0) != 0 or g.coefficient(0, 0) != 0:
        return IntersectionNumber(0)
    bound = _bezout_bound(f, g)
    total = IntersectionNumber(0)
    for b in branches if branches is not None else puiseux_expand(g, 4):
        o = order_on_branch(f, b, 16, bound)
        if o is None:
            return INF
        total = total + o * b.multiplicity * b.conjugacy
    return total


def intersection_multiplicity(f, g, method="both"):
    """i0(f, g) at the origin.

    ``method`` is "resultant", "zeuthen" or "both"; with "both" the two
    independent computations must agree.
    """
    if isinstance(f, TruncSeries) or isinstance(g, TruncSeries):
        if isinstance(f, TruncSeries):
            return intersection_with_series(f, g)
        return intersection_with_series(g, f)
    if method == "resultant":
        return intersection_resultant(f, g)
    if method == "zeuthen":
        return intersection_zeuthen(f, g)
    a = intersection_resultant(f, g)
    b = intersection_zeuthen(f, g)
    if a != b:
        raise MethodDisagreement("i0 disagreement: resultant %s, Zeuthen %s for (%s, %s)"
                                 % (a, b, f, g))
    return a


class PrecisionTooLow(AlgebraError):
    """A truncated series is too short to certify the requested invariant."""


def intersection_with_series(D, H, branches=None):
    """i0(D, H) for a truncated series D and a polynomial H (Zeuthen over H)."""
    P = D.precision
    body = D.body
    if body.coefficient(0, 0) != 0:
        return IntersectionNumber(0)
    total = 0
    for b in branches if branches is not None else puiseux_expand(H, 4):
        x, y = b.param(4 * P + 8)
        ox, oy = x.valuation(), y.valuation()
        floor = P * min(o for o in (ox, oy) if o is not None)
        n = floor + 1
        x, y = b.param(n)
        v = evaluate_bipoly(body.lift(_branch_join(body, b)), x, y, n).valuation()
        if v is None or v >= floor:
            raise PrecisionTooLow("i0 with a series truncated at degree %d is not certified" % P)
        total += v * b.multiplicity * b.conjugacy
    return IntersectionNumber(total)


# -- Milnor number ---------------------------------------------------------

def milnor_number(h, method="resultant"):
    """mu(h) = i0(h_x, h_y); raises NonIsolatedError on a shared component."""
    if h.is_zero():
        raise AlgebraError("Milnor number of the zero germ")
    hx, hy = h.derivative("x"), h.derivative("y")
    if hx.coefficient(0, 0) != 0 or hy.coefficient(0, 0) != 0:
        return 0
    if hx.is_zero() or hy.is_zero():
        raise NonIsolatedError("non-isolated singularity: a partial derivative vanishes identically")
    if h.K.depth == 0:
        c = hx.p.gcd(hy.p)
        if not c.is_constant() and c.to_dict().get((0, 0), 0) == 0:
            raise NonIsolatedError("non-isolated singularity along the common factor %s"
                                   % BiPoly(QQ, c).to_str())
    n = intersection_multiplicity(hx, hy, method)
    if n.infinite:
        raise NonIsolatedError("non-isolated singularity (partials share a component over %r)" % h.K)
    return int(n)


# -- Casas identity --------------------------------------------------------

@dataclass
class CasasReport:
    lhs: int
    rhs: int
    mu_h: int
    i_fg: int
    mu_H: int
    i_DH: int

    @property
    def holds(self):
        return self.lhs == self.rhs

    def to_json(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "holds": self.holds,
                "mu_h": self.mu_h, "i0_fg": self.i_fg, "mu_H": self.mu_H, "i0_DH": self.i_DH}


def casas_check(f, g, H, disc=None):
    """Both sides of mu(h) - 1 = i0(f,g)(mu(H) - 1) + i0(D, H), h = H(f, g)."""
    from .discriminant import discriminant
    h = H.compose(f, g)
    mu_h = milnor_number(h)
    i_fg = int(intersection_multiplicity(f, g, "resultant"))
    mu_H = milnor_number(H)
    if disc is None:
        disc = discriminant(f, g)
    if disc.is_unit():
        i_DH = 0
    else:
        i_DH = _i0_disc(disc, H)
    lhs = mu_h - 1
    rhs = i_fg * (mu_H - 1) + i_DH
    return CasasReport(lhs, rhs, mu_h, i_fg, mu_H, i_DH)


def _i0_disc(disc, H):
    """i0(D, H), raising the discriminant precision until certified."""
    from .discriminant import discriminant_at_precision
    cur = disc
    for _ in range(6):
        try:
            return int(intersection_with_series(cur.equation, H))
        except PrecisionTooLow:
            cur = discriminant_at_precision(cur.f, cur.g, 2 * cur.precision)
    raise PrecisionTooLow("i0(D, H) not certified")


# -- equisingularity -------------------------------------------------------

@dataclass
class CBranch:
    label: str
    source: int          # index of the K-branch
    embedding: int       # index of the complex embedding
    semigroup: tuple
    multiplicity: int


@dataclass
class EquisingularityType:
    branches: list
    matrix: list
    kbranches: list = field(default_factory=list, repr=False)

    def to_json(self):
        return {
            "branches": [{"label": b.label, "semigroup": list(b.semigroup),
                          "multiplicity": b.multiplicity} for b in self.branches],
            "matrix": [[None if i == j else e.to_json() for j, e in enumerate(row)]
                       for i, row in enumerate(self.matrix)],
        }


def _embedding_values(K, bits):
    """theta of K at each root of its modulus, in sorted-root order."""
    return sorted_roots(K.modulus, bits)


def _index_of(val, roots):
    hits = [i for i, r in enumerate(roots) if r.overlaps(val)]
    if len(hits) != 1:
        return None
    return hits[0]


def _eval_poly_at(poly, z):
    acc = acb(0)
    for c in reversed(poly.coeffs()):
        acc = acc * z + acb(c)
    return acc


def _pair_orbits(K1, K2):
    """Orbits of pairs of complex embeddings (s1, s2) of K1 x K2.

    Returns a list of (L, alpha, pairs): L extends K1, alpha in L is a root
    of K2's modulus (the image of K2's theta), and ``pairs`` lists the
    embedding index pairs in the orbit.
    """
    M2 = UniPoly([fmpq(c) for c in K2.modulus.coeffs()])
    if K1.depth == 0:
        facs = uni_factor(M2, QQ)
    else:
        facs = uni_factor(M2.lift(K1), K1)
    out = []
    for h, _ in facs:
        if h.degree == 1:
            L = K1
            alpha = simplify(-h.coeffs[0] / h.coeffs[1])
        else:
            L = K1.adjoin([K1.lift(c) for c in h.coeffs])
            alpha = L.generator()
        out.append((L, alpha, _label_pairs(K1, K2, L, alpha)))
    return out


def _label_pairs(K1, K2, L, alpha):
    for bits in (128, 256, 512, 1024):
        with _precision(bits):
            r1 = _embedding_values(K1, bits) if K1.depth else [acb(0)]
            r2 = _embedding_values(K2, bits) if K2.depth else [acb(0)]
            rl = _embedding_values(L, bits) if L.depth else [acb(0)]
            th1 = L.embedding(K1) if K1.depth else None
            ap = L.lift(alpha).poly if L.depth else None
            pairs = []
            ok = True
            for z in rl:
                v1 = _eval_poly_at(th1, z) if th1 is not None else acb(0)
                if K2.depth == 0:
                    v2 = acb(0)
                elif ap is None:
                    v2 = acb(alpha)
                else:
                    v2 = _eval_poly_at(ap, z)
                i1 = _index_of(v1, r1) if K1.depth else 0
                i2 = _index_of(v2, r2) if K2.depth else 0
                if i1 is None or i2 is None:
                    ok = False
                    break
                pairs.append((i1, i2))
            if ok and len(set(pairs)) == len(pairs):
                return pairs
    raise AlgebraError("could not separate complex embeddings")  # pragma: no cover


def _map_branch(b, L, alpha):
    """The branch b with its tower's theta sent to alpha in L."""
    from .series import Series
    K = b.K
    if K.depth == 0:
        return b
    a = L.lift(alpha)

    def img(c):
        c = K.lift(c)
        acc = L.zero()
        for co in reversed(c.poly.coeffs()):
            acc = acc * a + co
        return acc

    def y_series(nn):
        s = b.y_series(nn)
        return Series(L, [img(c) for c in s.c], s.prec)

    nb = Branch(b.m, Series(L, [img(c) for c in b.tail.c], b.tail.prec), b.multiplicity,
                b.swapped, 1, img(b.gamma), L, b.separation, None)
    nb.y_series = y_series  # type: ignore[method-assign]
    return nb


def branch_contact(b1, b2):
    """i0 between one complex branch of b1 and one of b2, both over one tower.

    Uses the single-branch implicit equation of b2 evaluated on b1.
    """
    P = 8
    while True:
        F = implicitize(b2, P, trace=False)
        n = 4 * P * max(b1.m, b2.m) + 8
        x, y = b1.param(n)
        chart = y if b2.swapped else x
        oc = chart.valuation()
        floor = P * (oc if oc is not None else n)
        floor = min(floor, n)
        v = evaluate_bipoly(F.poly.lift(_branch_join(F.poly, b1)), x, y, floor).valuation()
        if v is not None and v < floor:
            return v
        if P > 4096:
            return None
        P *= 2


def equisingularity_type(germs, cap=64):
    """Labeled complex branches with semigroups and the full i0 matrix.

    ``germs`` is a list of (label, BiPoly) pairs (or a dict).
    """
    if isinstance(germs, dict):
        germs = list(germs.items())
    kbr = []
    for label, f in germs:
        if f.K.depth != 0:
            raise AlgebraError("equisingularity types need rational input germs")
        for b in puiseux_expand(f, 8):
            kbr.append((label, b))
    total = sum(b.conjugacy for _, b in kbr)
    if total > cap:
        raise AlgebraError("%d branches exceed the matching cap %d" % (total, cap))
    cbr = []
    start = []
    for idx, (label, b) in enumerate(kbr):
        sg = semigroup(b).generators
        start.append(len(cbr))
        for e in range(b.conjugacy):
            cbr.append(CBranch(label, idx, e, sg, b.multiplicity))
    n = len(cbr)
    M = [[None] * n for _ in range(n)]
    for i1, (_, b1) in enumerate(kbr):
        for i2, (_, b2) in enumerate(kbr):
            if i2 < i1:
                continue
            for L, alpha, pairs in _pair_orbits(b1.K, b2.K):
                mb2 = _map_branch(b2, L, alpha) if b2.K.depth else b2
                if i1 == i2 and L is b1.K and _same_theta(b1.K, alpha):
                    continue  # the diagonal
                b1L = b1 if L is b1.K else _lift_branch(b1, L)
                v = branch_contact(b1L, mb2)
                val = INF if v is None else IntersectionNumber(v)
                for s1, s2 in pairs:
                    a, c = start[i1] + s1, start[i2] + s2
                    if a == c:
                        continue
                    M[a][c] = val
                    M[c][a] = val
    for i in range(n):
        M[i][i] = IntersectionNumber(0)
    return EquisingularityType(cbr, M, kbr)


def _same_theta(K, alpha):
    if K.depth == 0:
        return True
    return K.lift(alpha) == K.theta()


def _lift_branch(b, L):
    from .series import Series
    nb = Branch(b.m, b.tail.lift(L), b.multiplicity, b.swapped, 1, L.lift(b.gamma), L,
                b.separation, None)
    nb.y_series = lambda nn: b.y_series(nn).lift(L)  # type: ignore[method-assign]
    return nb


@dataclass
class EquisingularityVerdict:
    equisingular: bool
    matching: list = None
    reason: str = ""

    def __bool__(self):
        return self.equisingular

    def to_json(self):
        return {"equisingular": self.equisingular, "matching": self.matching, "reason": self.reason}


def equisingular(a, b):
    """Search a label-preserving branch bijection matching all invariants."""
    A, B = a.branches, b.branches
    if len(A) != len(B):
        return EquisingularityVerdict(False, None, "branch counts differ")

    def key(br):
        return (br.label, br.semigroup, br.multiplicity)

    if sorted(map(key, A)) != sorted(map(key, B)):
        return EquisingularityVerdict(False, None, "labels, semigroups or multiplicities differ")
    order = sorted(range(len(A)), key=lambda i: key(A[i]))
    n = len(A)
    assign = [None] * n
    used = [False] * n

    def rec(pos):
        if pos == n:
            return True
        i = order[pos]
        for j in range(n):
            if used[j] or key(B[j]) != key(A[i]):
                continue
            if all(a.matrix[i][order[p]] == b.matrix[j][assign[order[p]]] for p in range(pos)):
                used[j] = True
                assign[i] = j
                if rec(pos + 1):
                    return True
                used[j] = False
                assign[i] = None
        return False

    if rec(0):
        return EquisingularityVerdict(True, list(assign), "")
    return EquisingularityVerdict(False, None, "no bijection matches the intersection matrices")
