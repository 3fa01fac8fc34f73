"""Exact scalars: rationals and towers of simple algebraic extensions.

Rationals are flint ``fmpq`` values and are used directly on the all-rational
path.  A :class:`FieldTower` is built one level at a time by adjoining a root
of a monic irreducible polynomial over the previous level.  Internally every
tower is also presented as ``Q(theta)`` for a primitive element ``theta``, so
arithmetic is univariate polynomial arithmetic modulo one rational modulus.
"""

from __future__ import annotations

import contextlib
import contextvars
import functools
import itertools
import threading

import flint
from flint import acb, fmpq, fmpq_mat, fmpq_mpoly_ctx, fmpq_poly, fmpz


class AlgebraError(Exception):
    """Base class for failures of exact computations."""


class IncompatibleFieldError(AlgebraError):
    """Operands live in towers that are not nested."""


class CapacityError(AlgebraError):
    """A configured size cap was exceeded."""


_tower_cap = contextvars.ContextVar("max_tower_degree", default=16)


def max_tower_degree():
    return _tower_cap.get()


@contextlib.contextmanager
def tower_degree_cap(n):
    """Temporarily set the total tower-degree cap."""
    token = _tower_cap.set(int(n))
    try:
        yield
    finally:
        _tower_cap.reset(token)


def Q(a, b=1):
    """Shorthand for an exact rational ``a/b``."""
    if isinstance(a, str):
        return parse_rational(a)
    return fmpq(a, b)


def parse_rational(text):
    text = text.strip()
    if "/" in text:
        n, d = text.split("/", 1)
        return fmpq(int(n), int(d))
    return fmpq(int(text))


def rational_str(q):
    q = fmpq(q)
    if q.q == 1:
        return str(q.p)
    return "%s/%s" % (q.p, q.q)


_numeric_lock = threading.RLock()


@contextlib.contextmanager
def _precision(bits):
    with _numeric_lock:
        old = flint.ctx.prec
        flint.ctx.prec = bits
        try:
            yield
        finally:
            flint.ctx.prec = old


def _cmp_roots(a, b):
    ra, rb = a.real, b.real
    if not ra.overlaps(rb):
        return -1 if ra < rb else 1
    ia, ib = a.imag, b.imag
    if not ia.overlaps(ib):
        return -1 if ia < ib else 1
    return 0


def sorted_roots(poly, bits=256):
    """Complex roots of a squarefree rational polynomial in the fixed order.

    Roots are ordered by real part, then imaginary part.  Real parts whose
    enclosures overlap at the working precision count as equal, which is what
    happens for complex-conjugate pairs.
    """
    poly = fmpq_poly(poly)
    with _precision(bits):
        roots = [r for r, _ in poly.complex_roots()]
        return sorted(roots, key=functools.cmp_to_key(_cmp_roots))


class FieldTower:
    """A tower Q = K_0 < K_1 < ... < K_n of simple extensions.

    ``levels`` lists ``(name, minpoly)`` pairs, each minpoly being a tuple of
    coefficients (low degree first) in the previous level.  ``modulus`` is the
    rational minimal polynomial of the primitive element ``theta``.
    """

    def __init__(self, parent=None, name=None, minpoly=None, modulus=None,
                 parent_theta=None, alpha=None, to_tower=None):
        self.parent = parent
        if parent is None:
            self.levels = ()
            self.modulus = fmpq_poly([0, 1])
            self.degree = 1
            self.depth = 0
        else:
            self.levels = parent.levels + ((name, tuple(minpoly)),)
            self.modulus = modulus
            self.degree = modulus.degree()
            self.depth = parent.depth + 1
        # parent's theta and the new generator, written as polynomials in theta
        self.parent_theta = parent_theta
        self.alpha = alpha
        self.to_tower = to_tower
        self._embed = {}
        self._lock = threading.Lock()
        self._theta_cache = {}

    # -- structure -------------------------------------------------------
    def __repr__(self):
        if self.depth == 0:
            return "QQ"
        names = ",".join(n for n, _ in self.levels)
        return "FieldTower(%s; deg %d)" % (names, self.degree)

    def is_rational(self):
        return self.depth == 0

    def ancestors(self):
        out, k = [], self
        while k is not None:
            out.append(k)
            k = k.parent
        return out

    def extends(self, other):
        """True when ``other`` is this tower or one of its prefixes."""
        k = self
        while k is not None:
            if k is other:
                return True
            k = k.parent
        return False

    def embedding(self, ancestor):
        """Polynomial expressing the ancestor's theta in this tower's theta."""
        if ancestor is self:
            return fmpq_poly([0, 1])
        with self._lock:
            hit = self._embed.get(id(ancestor))
        if hit is not None:
            return hit
        if not self.extends(ancestor):
            raise IncompatibleFieldError("%r is not a prefix of %r" % (ancestor, self))
        inner = self.parent.embedding(ancestor)
        r = inner(self.parent_theta) % self.modulus if self.parent.depth else fmpq_poly([0])
        with self._lock:
            self._embed[id(ancestor)] = r
        return r

    def generators(self):
        """All level generators as elements of this tower."""
        gens = []
        for k in reversed(self.ancestors()[:-1]):
            g = FieldElement(k, k.alpha)
            gens.append(self.lift(g))
        return gens

    def generator(self):
        return FieldElement(self, self.alpha)

    def theta(self):
        return FieldElement(self, fmpq_poly([0, 1]))

    def lift(self, a):
        """Coerce ``a`` (an int, rational or element of a prefix) into this tower."""
        if isinstance(a, FieldElement):
            if a.tower is self:
                return a
            if self.extends(a.tower):
                r = self.embedding(a.tower)
                return FieldElement(self, a.poly(r) % self.modulus)
            raise IncompatibleFieldError("cannot coerce element of %r into %r" % (a.tower, self))
        if self.depth == 0:
            return fmpq(a)
        return FieldElement(self, fmpq_poly([fmpq(a)]))

    def from_poly(self, poly):
        poly = fmpq_poly(poly)
        if self.depth == 0:
            return poly(fmpq(0))
        return FieldElement(self, poly % self.modulus)

    def from_coords(self, coords):
        return self.from_poly(fmpq_poly([fmpq(c) for c in coords]))

    def zero(self):
        return self.lift(0)

    def one(self):
        return self.lift(1)

    # -- extension -------------------------------------------------------
    def adjoin(self, minpoly, name=None):
        """Adjoin a root of ``minpoly`` (coefficients low-first, monic, irreducible).

        Returns the new tower.  The root is ``new_tower.generator()``.
        """
        coeffs = [self.lift(c) for c in minpoly]
        e = len(coeffs) - 1
        if e < 2:
            raise AlgebraError("adjoin needs a polynomial of degree >= 2")
        if coeffs[-1] != 1:
            raise AlgebraError("adjoin needs a monic polynomial")
        total = self.degree * e
        cap = max_tower_degree()
        if total > cap:
            raise CapacityError(
                "tower degree %d exceeds the cap max_tower_degree=%d" % (total, cap))
        if name is None:
            name = "a%d" % (self.depth + 1)
        if self.depth == 0:
            mod = fmpq_poly([fmpq(c) for c in coeffs])
            ident = fmpq_mat(total, total, [1 if i == j else 0 for i in range(total) for j in range(total)])
            return FieldTower(self, name, coeffs, mod, fmpq_poly([0]), fmpq_poly([0, 1]), ident)
        cpolys = [c.poly if isinstance(c, FieldElement) else fmpq_poly([c]) for c in coeffs]
        ctx = fmpq_mpoly_ctx.get(("z", "s"), "lex")
        z, s = ctx.gens()
        M = ctx.from_dict({(i, 0): c for i, c in enumerate(self.modulus.coeffs()) if c != 0})
        for c in _shift_candidates():
            shifted = s - c * z
            P = ctx.from_dict({(0, 0): 0})
            for j, cp in enumerate(cpolys):
                cz = ctx.from_dict({(i, 0): v for i, v in enumerate(cp.coeffs()) if v != 0})
                P = P + cz * shifted ** j
            N = M.resultant(P, "z")
            nd = N.to_dict()
            npoly = fmpq_poly([0] * (total + 1))
            npoly = fmpq_poly([nd.get((0, k), 0) for k in range(total + 1)])
            if npoly.degree() != total:
                continue
            if npoly.gcd(npoly.derivative()).degree() > 0:
                continue
            npoly = npoly / npoly.leading_coefficient()
            to_tower = _tower_matrix(self, cpolys, c, total)
            ptheta = _solve_in_basis(to_tower, _unit_vector(total, 1))
            alpha = _solve_in_basis(to_tower, _unit_vector(total, self.degree))
            return FieldTower(self, name, coeffs, npoly, ptheta, alpha, to_tower)
        raise AlgebraError("no primitive element found")  # pragma: no cover

    # -- numerics --------------------------------------------------------
    def theta_numeric(self, bits=256):
        """Numeric value of theta under the tower's fixed embedding (root 0)."""
        if self.depth == 0:
            return acb(0)
        with self._lock:
            hit = self._theta_cache.get(bits)
        if hit is not None:
            return hit
        r = sorted_roots(self.modulus, bits)[0]
        with self._lock:
            self._theta_cache[bits] = r
        return r

    def describe(self):
        """JSON-friendly description of the levels."""
        out = []
        for name, mp in self.levels:
            out.append({"name": name, "minpoly": [scalar_str(c) for c in mp]})
        return {"levels": out, "degree": self.degree,
                "primitive_minpoly": [rational_str(c) for c in self.modulus.coeffs()]}


def _shift_candidates():
    yield 1
    for k in itertools.count(2):
        yield k
        yield -k + 1


def _unit_vector(n, i):
    v = [0] * n
    v[i] = 1
    return v


def _tower_matrix(K, cpolys, c, total):
    """Columns: powers of alpha + c*theta in the basis theta^a alpha^b (b-major)."""
    d, e = K.degree, len(cpolys) - 1
    M = K.modulus

    def mul_by_gen(vec):
        # vec: list of e polynomials in theta (coefficients of alpha^b)
        out = [fmpq_poly([0]) for _ in range(e + 1)]
        for b, beta in enumerate(vec):
            out[b + 1] += beta
            out[b] += (beta * fmpq_poly([0, c])) % M
        top = out[e]
        out = out[:e]
        if not top.is_zero():
            for i in range(e):
                out[i] = (out[i] - top * cpolys[i]) % M
        return out

    cols = []
    cur = [fmpq_poly([1])] + [fmpq_poly([0]) for _ in range(e - 1)]
    for _ in range(total):
        flat = []
        for beta in cur:
            cs = beta.coeffs()
            flat.extend([cs[a] if a < len(cs) else fmpq(0) for a in range(d)])
        cols.append(flat)
        cur = mul_by_gen(cur)
    return fmpq_mat(total, total, [cols[j][i] for i in range(total) for j in range(total)])


def _solve_in_basis(A, target):
    n = A.nrows()
    x = A.solve(fmpq_mat(n, 1, target))
    return fmpq_poly([x[i, 0] for i in range(n)])


QQ = FieldTower()


class FieldElement:
    """Element of a non-trivial tower, stored as a polynomial in theta."""

    __slots__ = ("tower", "poly")

    def __init__(self, tower, poly):
        self.tower = tower
        self.poly = poly

    @property
    def coords(self):
        cs = self.poly.coeffs()
        return [cs[i] if i < len(cs) else fmpq(0) for i in range(self.tower.degree)]

    def _other(self, b):
        if isinstance(b, FieldElement):
            if b.tower is self.tower:
                return self, b.poly
            if b.tower.extends(self.tower):
                return b.tower.lift(self), b.poly
            if self.tower.extends(b.tower):
                return self, self.tower.lift(b).poly
            raise IncompatibleFieldError("elements of %r and %r do not mix" % (self.tower, b.tower))
        if isinstance(b, (int, fmpq, fmpz)):
            return self, fmpq_poly([fmpq(b)])
        return None, None

    def __add__(self, b):
        a, bp = self._other(b)
        if a is None:
            return NotImplemented
        return FieldElement(a.tower, a.poly + bp)

    __radd__ = __add__

    def __sub__(self, b):
        a, bp = self._other(b)
        if a is None:
            return NotImplemented
        return FieldElement(a.tower, a.poly - bp)

    def __rsub__(self, b):
        a, bp = self._other(b)
        if a is None:
            return NotImplemented
        return FieldElement(a.tower, bp - a.poly)

    def __mul__(self, b):
        a, bp = self._other(b)
        if a is None:
            return NotImplemented
        if bp.degree() <= 0:
            return FieldElement(a.tower, a.poly * bp)
        return FieldElement(a.tower, (a.poly * bp) % a.tower.modulus)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(self.tower, -self.poly)

    def __pos__(self):
        return self

    def inverse(self):
        if self.poly.is_zero():
            raise ZeroDivisionError("inverse of zero in %r" % (self.tower,))
        g, s, _ = self.poly.xgcd(self.tower.modulus)
        return FieldElement(self.tower, (s / g.leading_coefficient()) % self.tower.modulus)

    def __truediv__(self, b):
        a, bp = self._other(b)
        if a is None:
            return NotImplemented
        if bp.degree() <= 0:
            if bp.is_zero():
                raise ZeroDivisionError("division by zero")
            return FieldElement(a.tower, a.poly / bp[0])
        return a * FieldElement(a.tower, bp).inverse()

    def __rtruediv__(self, b):
        a, bp = self._other(b)
        if a is None:
            return NotImplemented
        return FieldElement(a.tower, bp) * a.inverse()

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        result = fmpq_poly([1])
        base = self.poly
        M = self.tower.modulus
        while n:
            if n & 1:
                result = (result * base) % M
            n >>= 1
            if n:
                base = (base * base) % M
        return FieldElement(self.tower, result)

    def __eq__(self, b):
        a, bp = self._other(b)
        if a is None:
            return NotImplemented
        return a.poly == bp

    def __ne__(self, b):
        r = self.__eq__(b)
        if r is NotImplemented:
            return r
        return not r

    def __bool__(self):
        return not self.poly.is_zero()

    def __hash__(self):
        if self.poly.degree() <= 0:
            return hash(self.poly[0])
        return hash((id(self.tower), tuple(self.poly.coeffs())))

    def is_rational(self):
        return self.poly.degree() <= 0

    def rational_value(self):
        if not self.is_rational():
            raise AlgebraError("element is not rational")
        return self.poly[0]

    def __repr__(self):
        return "FieldElement(%s)" % scalar_str(self)


# -- generic scalar helpers -------------------------------------------------

def is_scalar(a):
    return isinstance(a, (int, fmpq, fmpz, FieldElement))


def tower_of(a):
    if isinstance(a, FieldElement):
        return a.tower
    return QQ


def join_towers(*towers):
    """The largest of a chain of nested towers."""
    best = QQ
    for k in towers:
        if k is None or k is best:
            continue
        if k.extends(best):
            best = k
        elif not best.extends(k):
            raise IncompatibleFieldError("towers %r and %r are not nested" % (best, k))
    return best


def common_tower(*scalars):
    return join_towers(*[tower_of(a) for a in scalars])


def scalar_is_zero(a):
    if isinstance(a, FieldElement):
        return a.poly.is_zero()
    return a == 0


def simplify(a):
    """Demote tower elements that are rational to plain rationals."""
    if isinstance(a, FieldElement) and a.poly.degree() <= 0:
        return a.poly[0] if a.poly.degree() == 0 else fmpq(0)
    if isinstance(a, (int, fmpz)):
        return fmpq(a)
    return a


def scalar_str(a):
    a = simplify(a)
    if isinstance(a, fmpq):
        return rational_str(a)
    terms = []
    for i, c in enumerate(a.poly.coeffs()):
        if c == 0:
            continue
        mon = "" if i == 0 else ("th" if i == 1 else "th^%d" % i)
        if mon == "":
            terms.append(rational_str(c))
        elif c == 1:
            terms.append(mon)
        elif c == -1:
            terms.append("-" + mon)
        else:
            terms.append("%s*%s" % (rational_str(c), mon))
    return "(" + " + ".join(terms).replace("+ -", "- ") + ")"


def minimal_polynomial(a):
    """Monic minimal polynomial of a scalar over Q, as an fmpq_poly."""
    a = simplify(a)
    if not isinstance(a, FieldElement):
        return fmpq_poly([-fmpq(a), 1])
    K = a.tower
    ctx = fmpq_mpoly_ctx.get(("z", "s"), "lex")
    z, s = ctx.gens()
    M = ctx.from_dict({(i, 0): c for i, c in enumerate(K.modulus.coeffs()) if c != 0})
    A = ctx.from_dict({(i, 0): c for i, c in enumerate(a.poly.coeffs()) if c != 0})
    charpoly = M.resultant(s - A, "z")
    d = charpoly.to_dict()
    cp = fmpq_poly([d.get((0, k), 0) for k in range(K.degree + 1)])
    _, facs = cp.factor()
    if len(facs) != 1:
        raise AlgebraError("characteristic polynomial is not a prime power")  # pragma: no cover
    f = facs[0][0]
    return f / f.leading_coefficient()


def numeric(a, bits=256):
    """Value of a scalar under the tower's fixed complex embedding."""
    a = simplify(a)
    with _precision(bits):
        if not isinstance(a, FieldElement):
            return acb(a)
        th = a.tower.theta_numeric(bits)
        acc = acb(0)
        for c in reversed(a.poly.coeffs()):
            acc = acc * th + acb(c)
        return acc


def root_index(a):
    """Index of the scalar among the sorted roots of its minimal polynomial."""
    mp = minimal_polynomial(a)
    if mp.degree() == 1:
        return 0
    for bits in (128, 256, 512, 1024, 2048):
        roots = sorted_roots(mp, bits)
        val = numeric(a, bits)
        hits = [i for i, r in enumerate(roots) if r.overlaps(val)]
        if len(hits) == 1:
            return hits[0]
    raise AlgebraError("could not isolate algebraic number")  # pragma: no cover


def approx_str(z, digits=12):
    with _precision(128):
        re = float(z.real.mid())
        im = float(z.imag.mid())
    fmt = "%." + str(digits) + "g"
    if abs(im) < 1e-30:
        return fmt % re
    sign = "+" if im >= 0 else "-"
    return (fmt % re) + sign + (fmt % abs(im)) + "i"


def describe_scalar(a):
    """Exact descriptor: minimal polynomial over Q, root index, decimal value."""
    a = simplify(a)
    if not isinstance(a, FieldElement):
        return {"rational": rational_str(a)}
    mp = minimal_polynomial(a)
    return {
        "minpoly": [rational_str(c) for c in mp.coeffs()],
        "root_index": root_index(a),
        "approx": approx_str(numeric(a, 128)),
        "tower": a.tower.describe(),
        "coords": [rational_str(c) for c in a.coords],
    }


def descriptor_key(a):
    """Hashable exact identity of an algebraic number (minpoly, root index)."""
    a = simplify(a)
    if not isinstance(a, FieldElement):
        return ((rational_str(-fmpq(a)), "1"), 0)
    mp = minimal_polynomial(a)
    return (tuple(rational_str(c) for c in mp.coeffs()), root_index(a))


def relative_trace(a, base):
    """Trace of ``a`` from its tower down to the prefix ``base``."""
    K = tower_of(a)
    a = K.lift(a)
    while K is not base:
        if K.depth == 0:
            raise IncompatibleFieldError("%r is not below the element's tower" % (base,))
        a = _trace_one_level(a, K)
        K = K.parent
    return a


def _trace_one_level(a, K):
    P = K.parent
    d = P.degree
    e = len(K.levels[-1][1]) - 1
    n = K.degree
    v = fmpq_mat(n, 1, a.coords if isinstance(a, FieldElement) else [a] + [0] * (n - 1))
    t = K.to_tower * v
    betas = [P.from_coords([t[b * d + i, 0] for i in range(d)]) for b in range(e)]
    cs = [P.lift(c) for c in K.levels[-1][1]]
    # power sums of the roots of the level polynomial
    ps = [P.lift(e)]
    for k in range(1, e):
        acc = -k * cs[e - k]
        for j in range(1, k):
            acc = acc - cs[e - j] * ps[k - j]
        ps.append(acc)
    total = P.zero()
    for b in range(e):
        total = total + betas[b] * ps[b]
    return simplify(total)
