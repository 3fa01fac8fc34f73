"""Bivariate polynomials and truncated bivariate series over a tower.

A :class:`BiPoly` wraps a flint multivariate polynomial.  Over Q it lives in
the context ``(x, y)``; over a tower ``Q(theta)`` it lives in ``(x, y, z)``
and is kept reduced modulo the rational minimal polynomial of theta, with
``z`` standing for theta.
"""

from __future__ import annotations

import threading

from flint import fmpq, fmpq_mpoly_ctx, fmpq_poly, fmpz

from .numbers import (QQ, FieldElement, IncompatibleFieldError, join_towers,
                      rational_str, scalar_str, simplify, tower_of)

CTX2 = fmpq_mpoly_ctx.get(("x", "y"), "lex")
CTX3 = fmpq_mpoly_ctx.get(("x", "y", "z"), "lex")

_mod_cache = {}
_mod_lock = threading.Lock()


def _modulus3(K):
    key = id(K)
    with _mod_lock:
        hit = _mod_cache.get(key)
        if hit is not None and hit[0] is K:
            return hit[1]
    m = CTX3.from_dict({(0, 0, i): c for i, c in enumerate(K.modulus.coeffs()) if c != 0})
    with _mod_lock:
        _mod_cache[key] = (K, m)
    return m


def ctx_of(K):
    return CTX2 if K.depth == 0 else CTX3


def reduce3(p, K):
    if K.depth == 0:
        return p
    return divmod(p, _modulus3(K))[1]


def scalar_to_mpoly(c, K):
    """A scalar of (a prefix of) K as a constant mpoly of K's context."""
    c = K.lift(c)
    if K.depth == 0:
        return CTX2.from_dict({(0, 0): c}) if c != 0 else CTX2.from_dict({})
    return CTX3.from_dict({(0, 0, k): v for k, v in enumerate(c.poly.coeffs()) if v != 0})


class BiPoly:
    """Polynomial sum a_ij x^i y^j with coefficients in a FieldTower."""

    __slots__ = ("K", "p")

    def __init__(self, K, p):
        self.K = K
        self.p = p

    # -- constructors ----------------------------------------------------
    @staticmethod
    def from_dict(d, K=None):
        if K is None:
            K = join_towers(*[tower_of(c) for c in d.values()])
        if K.depth == 0:
            return BiPoly(K, CTX2.from_dict({k: fmpq(v) for k, v in d.items() if v != 0}))
        out = {}
        for (i, j), c in d.items():
            c = K.lift(c)
            for k, v in enumerate(c.poly.coeffs()):
                if v != 0:
                    out[(i, j, k)] = v
        return BiPoly(K, CTX3.from_dict(out))

    @staticmethod
    def const(c, K=None):
        return BiPoly.from_dict({(0, 0): c}, K)

    @staticmethod
    def zero(K=QQ):
        return BiPoly(K, ctx_of(K).from_dict({}))

    @staticmethod
    def monomial(i, j, c=1, K=None):
        return BiPoly.from_dict({(i, j): c}, K)

    @staticmethod
    def x(K=QQ):
        return BiPoly.monomial(1, 0, 1, K)

    @staticmethod
    def y(K=QQ):
        return BiPoly.monomial(0, 1, 1, K)

    # -- views -----------------------------------------------------------
    def coeffs(self):
        """Dictionary (i, j) -> nonzero coefficient."""
        d = self.p.to_dict()
        if self.K.depth == 0:
            return {k: v for k, v in d.items()}
        grouped = {}
        for (i, j, k), v in d.items():
            grouped.setdefault((i, j), {})[k] = v
        out = {}
        for key, cs in grouped.items():
            n = max(cs) + 1
            out[key] = FieldElement(self.K, fmpq_poly([cs.get(k, 0) for k in range(n)]))
        return out

    def support(self):
        if self.K.depth == 0:
            return set(self.p.to_dict().keys())
        return {(i, j) for (i, j, _) in self.p.to_dict().keys()}

    def coefficient(self, i, j):
        if self.K.depth == 0:
            return self.p.to_dict().get((i, j), fmpq(0))
        return self.coeffs().get((i, j), self.K.zero())

    def is_zero(self):
        return self.p.is_zero()

    def __bool__(self):
        return not self.p.is_zero()

    def nterms(self):
        return len(self.support())

    def total_degree(self):
        return max((i + j for i, j in self.support()), default=-1)

    def order(self):
        """Lowest total degree of a term (the multiplicity at the origin)."""
        return min((i + j for i, j in self.support()), default=None)

    def x_order(self):
        return min((i for i, _ in self.support()), default=None)

    def y_order(self):
        return min((j for _, j in self.support()), default=None)

    def degree_in(self, var):
        idx = 0 if var in (0, "x", "u") else 1
        return max((e[idx] for e in self.support()), default=-1)

    def constant_term(self):
        return self.coefficient(0, 0)

    def is_rational(self):
        return self.K.depth == 0

    # -- coercion --------------------------------------------------------
    def lift(self, K):
        if K is self.K:
            return self
        if not K.extends(self.K):
            raise IncompatibleFieldError("cannot move %r coefficients into %r" % (self.K, K))
        if self.K.depth == 0:
            d = {(i, j, 0): v for (i, j), v in self.p.to_dict().items()}
            return BiPoly(K, CTX3.from_dict(d))
        r = K.embedding(self.K)
        x, y, z = CTX3.gens()
        rz = CTX3.from_dict({(0, 0, k): v for k, v in enumerate(r.coeffs()) if v != 0})
        return BiPoly(K, reduce3(self.p.compose(x, y, rz), K))

    def _pair(self, other):
        if isinstance(other, BiPoly):
            if other.K is self.K:
                return self, other
            K = join_towers(self.K, other.K)
            return self.lift(K), other.lift(K)
        if isinstance(other, (int, fmpq, fmpz, FieldElement)):
            K = join_towers(self.K, tower_of(other))
            a = self.lift(K)
            return a, BiPoly(K, scalar_to_mpoly(other, K))
        return None, None

    def simplify_field(self):
        """Move to Q when every coefficient is rational."""
        if self.K.depth == 0:
            return self
        d = self.p.to_dict()
        if all(k == 0 for (_, _, k) in d):
            return BiPoly(QQ, CTX2.from_dict({(i, j): v for (i, j, _), v in d.items()}))
        return self

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return BiPoly(a.K, a.p + b.p)

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return BiPoly(a.K, a.p - b.p)

    def __rsub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return BiPoly(a.K, b.p - a.p)

    def __neg__(self):
        return BiPoly(self.K, -self.p)

    def __mul__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return BiPoly(a.K, reduce3(a.p * b.p, a.K))

    __rmul__ = __mul__

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            raise ValueError("negative power of a polynomial")
        if self.K.depth == 0:
            return BiPoly(self.K, self.p ** n)
        result = BiPoly.const(1, self.K)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a.p == b.p

    def __ne__(self, other):
        r = self.__eq__(other)
        return r if r is NotImplemented else not r

    def __hash__(self):
        return hash(tuple(sorted((k, str(v)) for k, v in self.coeffs().items())))

    def scale_coeffs(self, c):
        return self * c

    def derivative(self, var):
        """Partial derivative in ``var`` ('x'/'u' or 'y'/'v', or 0/1)."""
        idx = 0 if var in (0, "x", "u") else 1
        return BiPoly(self.K, self.p.derivative(idx))

    def compose(self, fx, fy):
        """Substitute x -> fx, y -> fy (BiPolys)."""
        K = join_towers(self.K, fx.K, fy.K)
        a, fx, fy = self.lift(K), fx.lift(K), fy.lift(K)
        if K.depth == 0:
            return BiPoly(K, a.p.compose(fx.p, fy.p))
        z = CTX3.gens()[2]
        return BiPoly(K, reduce3(a.p.compose(fx.p, fy.p, z), K))

    def rescale(self, a, b):
        """The polynomial p(a*x, b*y)."""
        K = join_towers(self.K, tower_of(a), tower_of(b))
        out = {}
        for (i, j), c in self.lift(K).coeffs().items():
            out[(i, j)] = c * K.lift(a) ** i * K.lift(b) ** j
        return BiPoly.from_dict(out, K)

    def swap(self):
        out = {(j, i): c for (i, j), c in self.coeffs().items()}
        return BiPoly.from_dict(out, self.K)

    def truncate(self, precision):
        """Drop every term of total degree >= precision."""
        if self.K.depth == 0:
            d = {k: v for k, v in self.p.to_dict().items() if k[0] + k[1] < precision}
            return BiPoly(self.K, CTX2.from_dict(d))
        d = {k: v for k, v in self.p.to_dict().items() if k[0] + k[1] < precision}
        return BiPoly(self.K, CTX3.from_dict(d))

    def filter_terms(self, keep):
        """Sub-polynomial of the terms whose exponent pair satisfies ``keep``."""
        if self.K.depth == 0:
            d = {k: v for k, v in self.p.to_dict().items() if keep(k[0], k[1])}
            return BiPoly(self.K, CTX2.from_dict(d))
        d = {k: v for k, v in self.p.to_dict().items() if keep(k[0], k[1])}
        return BiPoly(self.K, CTX3.from_dict(d))

    def divide_monomial(self, i, j):
        """Exact division by x^i y^j."""
        if self.K.depth == 0:
            d = {(a - i, b - j): v for (a, b), v in self.p.to_dict().items()}
            if any(a < 0 or b < 0 for a, b in d):
                raise ValueError("not divisible by x^%d y^%d" % (i, j))
            return BiPoly(self.K, CTX2.from_dict(d))
        d = {(a - i, b - j, k): v for (a, b, k), v in self.p.to_dict().items()}
        if any(a < 0 or b < 0 for a, b, _ in d):
            raise ValueError("not divisible by x^%d y^%d" % (i, j))
        return BiPoly(self.K, CTX3.from_dict(d))

    def evaluate(self, a, b):
        K = join_towers(self.K, tower_of(a), tower_of(b))
        acc = K.zero()
        for (i, j), c in self.lift(K).coeffs().items():
            acc = acc + c * K.lift(a) ** i * K.lift(b) ** j
        return simplify(acc)

    def as_rational_mpoly(self, ctx=CTX2):
        if self.K.depth != 0:
            raise IncompatibleFieldError("polynomial has irrational coefficients")
        return self.p

    # -- printing --------------------------------------------------------
    def to_str(self, names=("x", "y")):
        items = sorted(self.coeffs().items(), key=lambda kv: (kv[0][0] + kv[0][1], -kv[0][0]))
        if not items:
            return "0"
        parts = []
        for (i, j), c in items:
            mon = []
            if i:
                mon.append(names[0] if i == 1 else "%s^%d" % (names[0], i))
            if j:
                mon.append(names[1] if j == 1 else "%s^%d" % (names[1], j))
            c = simplify(c)
            if isinstance(c, fmpq):
                neg = c < 0
                mag = -c if neg else c
                cs = rational_str(mag)
                if "/" in cs:
                    cs = "(%s)" % cs
            else:
                neg = False
                cs = scalar_str(c)
            if mon:
                body = "*".join(mon) if cs == "1" else cs + "*" + "*".join(mon)
            else:
                body = cs
            parts.append(("-" if neg else "+", body))
        s = ("-" if parts[0][0] == "-" else "") + parts[0][1]
        for sign, body in parts[1:]:
            s += " %s %s" % (sign, body)
        return s

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return "BiPoly(%s)" % self.to_str()


class TruncSeries:
    """A bivariate series known exactly in total degrees below ``precision``."""

    __slots__ = ("body", "precision")

    def __init__(self, body, precision):
        if precision < 1:
            raise ValueError("precision must be at least 1")
        self.body = body.truncate(precision)
        self.precision = precision

    @property
    def K(self):
        return self.body.K

    def _other(self, other):
        if isinstance(other, TruncSeries):
            return other.body, other.precision
        if isinstance(other, BiPoly):
            return other, None
        if isinstance(other, (int, fmpq, fmpz, FieldElement)):
            return BiPoly.const(other, tower_of(other)), None
        return None, None

    def order(self):
        o = self.body.order()
        return self.precision if o is None else o

    def __add__(self, other):
        b, pb = self._other(other)
        if b is None:
            return NotImplemented
        prec = self.precision if pb is None else min(self.precision, pb)
        return TruncSeries(self.body + b, prec)

    __radd__ = __add__

    def __sub__(self, other):
        b, pb = self._other(other)
        if b is None:
            return NotImplemented
        prec = self.precision if pb is None else min(self.precision, pb)
        return TruncSeries(self.body - b, prec)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return TruncSeries(-self.body, self.precision)

    def __mul__(self, other):
        b, pb = self._other(other)
        if b is None:
            return NotImplemented
        ob = b.order()
        if ob is None:
            return TruncSeries(BiPoly.zero(self.K), self.precision if pb is None else max(self.precision, pb))
        prec = self.precision + ob
        if pb is not None:
            prec = min(prec, pb + self.order())
        return TruncSeries(self.body.truncate(prec) * b.truncate(prec), prec)

    __rmul__ = __mul__

    def __pow__(self, n):
        result = TruncSeries(BiPoly.const(1, self.K), 10 ** 9)
        for _ in range(int(n)):
            result = result * self
        return result

    def derivative(self, var):
        return TruncSeries(self.body.derivative(var), max(1, self.precision - 1))

    def __eq__(self, other):
        if isinstance(other, TruncSeries):
            p = min(self.precision, other.precision)
            return self.body.truncate(p) == other.body.truncate(p) and self.precision == other.precision
        if isinstance(other, BiPoly):
            return self.body == other.truncate(self.precision)
        return NotImplemented

    def __hash__(self):
        return hash((hash(self.body), self.precision))

    def to_str(self, names=("x", "y")):
        return "%s + O(%d)" % (self.body.to_str(names), self.precision)

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return "TruncSeries(%s)" % self.to_str()


def as_bipoly(f):
    return f.body if isinstance(f, TruncSeries) else f


def precision_of(f):
    return f.precision if isinstance(f, TruncSeries) else None
