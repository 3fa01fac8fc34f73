"""Univariate truncated power series over a tower.

``Series(K, coeffs, prec)`` stands for sum coeffs[i] t^i + O(t^prec).  A
``prec`` of ``None`` marks an exact polynomial.  Products over a proper tower
go through one flint polynomial product via Kronecker packing of the theta
coordinates, so long series stay cheap.
"""

from __future__ import annotations

from flint import fmpq, fmpq_poly, fmpz

from .numbers import (QQ, AlgebraError, FieldElement, join_towers,
                      scalar_is_zero, tower_of)


class NonInvertibleSeriesError(AlgebraError):
    """Series reversion or inversion met a vanishing leading coefficient."""


def _minp(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class Series:
    __slots__ = ("K", "c", "prec")

    def __init__(self, K, coeffs, prec=None):
        self.K = K
        coeffs = list(coeffs)
        if prec is not None:
            coeffs = coeffs[:prec]
        while coeffs and scalar_is_zero(coeffs[-1]):
            coeffs.pop()
        self.c = coeffs
        self.prec = prec

    # -- constructors ----------------------------------------------------
    @staticmethod
    def from_list(coeffs, prec=None, K=None):
        if K is None:
            K = join_towers(*[tower_of(a) for a in coeffs])
        return Series(K, [K.lift(a) for a in coeffs], prec)

    @staticmethod
    def monomial(k, c=1, K=QQ, prec=None):
        return Series(K, [K.zero()] * k + [K.lift(c)], prec)

    @staticmethod
    def t(K=QQ, prec=None):
        return Series.monomial(1, 1, K, prec)

    @staticmethod
    def const(c, K=None, prec=None):
        K = K or tower_of(c)
        return Series(K, [K.lift(c)], prec)

    # -- views -----------------------------------------------------------
    def __getitem__(self, i):
        if self.prec is not None and i >= self.prec:
            raise AlgebraError("coefficient t^%d beyond precision %d" % (i, self.prec))
        if i < len(self.c):
            return self.c[i]
        return self.K.zero()

    def coeff(self, i):
        return self[i]

    def valuation(self):
        """Order in t; None if the series is zero to its precision."""
        for i, a in enumerate(self.c):
            if not scalar_is_zero(a):
                return i
        return None

    def is_zero(self):
        return not self.c

    def exponents(self):
        return [i for i, a in enumerate(self.c) if not scalar_is_zero(a)]

    def lift(self, K):
        if K is self.K:
            return self
        return Series(K, [K.lift(a) for a in self.c], self.prec)

    def truncate(self, n):
        return Series(self.K, self.c[:n], _minp(self.prec, n))

    def with_prec(self, n):
        """Same coefficients, precision lowered to ``n``."""
        return self.truncate(n)

    def _pair(self, other):
        if isinstance(other, Series):
            if other.K is self.K:
                return self, other
            K = join_towers(self.K, other.K)
            return self.lift(K), other.lift(K)
        if isinstance(other, (int, fmpq, fmpz, FieldElement)):
            K = join_towers(self.K, tower_of(other))
            return self.lift(K), Series(K, [K.lift(other)], None)
        return None, None

    # -- arithmetic ------------------------------------------------------
    def __add__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        n = max(len(a.c), len(b.c))
        za = a.K.zero()
        out = [(a.c[i] if i < len(a.c) else za) + (b.c[i] if i < len(b.c) else za) for i in range(n)]
        return Series(a.K, out, _minp(a.prec, b.prec))

    __radd__ = __add__

    def __neg__(self):
        return Series(self.K, [-a for a in self.c], self.prec)

    def __sub__(self, other):
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        return a + (-b)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, s):
        K = join_towers(self.K, tower_of(s))
        s = K.lift(s)
        return Series(K, [K.lift(a) * s for a in self.c], self.prec)

    def __mul__(self, other):
        if isinstance(other, (int, fmpq, fmpz, FieldElement)):
            return self.scale(other)
        a, b = self._pair(other)
        if a is None:
            return NotImplemented
        va, vb = a.valuation(), b.valuation()
        if va is None or vb is None:
            # one factor vanishes to its precision
            pa = a.prec if a.prec is not None else None
            pb = b.prec if b.prec is not None else None
            cand = []
            if va is None and pa is not None:
                cand.append(pa + (vb if vb is not None else (pb or 0)))
            if vb is None and pb is not None:
                cand.append(pb + (va if va is not None else (pa or 0)))
            return Series(a.K, [], min(cand) if cand else None)
        prec = None
        if a.prec is not None:
            prec = a.prec + vb
        if b.prec is not None:
            prec = _minp(prec, b.prec + va)
        n = len(a.c) + len(b.c) - 1
        if prec is not None:
            n = min(n, prec)
        return Series(a.K, _mul_low(a.K, a.c, b.c, n), prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, fmpq, fmpz, FieldElement)):
            K = join_towers(self.K, tower_of(other))
            return self.scale(1 / K.lift(other))
        return self * other.inverse()

    def __pow__(self, n):
        n = int(n)
        if n < 0:
            return self.inverse() ** (-n)
        result = Series(self.K, [self.K.one()], None)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def shift(self, k):
        """Multiply by t^k (k may be negative if the low terms vanish)."""
        if k >= 0:
            return Series(self.K, [self.K.zero()] * k + self.c,
                          None if self.prec is None else self.prec + k)
        v = self.valuation()
        if v is not None and v < -k:
            raise AlgebraError("shift would create negative exponents")
        return Series(self.K, self.c[-k:], None if self.prec is None else self.prec + k)

    def derivative(self):
        out = [a * i for i, a in enumerate(self.c)][1:]
        return Series(self.K, out, None if self.prec is None else max(self.prec - 1, 0))

    def inverse(self, prec=None):
        """Multiplicative inverse of a series with nonzero constant term."""
        if not self.c or scalar_is_zero(self.c[0]):
            raise NonInvertibleSeriesError("constant term vanishes")
        n = _minp(self.prec, prec)
        if n is None:
            raise AlgebraError("inverse of an exact series needs a precision")
        g = Series(self.K, [1 / self.c[0]], 1)
        k = 1
        while k < n:
            k = min(2 * k, n)
            f = self.truncate(k)
            g = Series(self.K, g.c, None)
            e = f * g
            g = (g * (Series.const(2, self.K) - e)).truncate(k)
        return g

    def power(self, alpha, prec=None):
        """(c0 + ...)^alpha for rational alpha; requires c0 == 1 unless alpha is an integer."""
        alpha = fmpq(alpha)
        if alpha.q == 1:
            s = self ** int(alpha.p)
            return s if prec is None else s.truncate(prec)
        if not self.c or self.c[0] != 1:
            raise AlgebraError("fractional power needs constant term 1")
        n = _minp(self.prec, prec)
        if n is None:
            raise AlgebraError("fractional power of an exact series needs a precision")
        f = [self[i] if i < len(self.c) else self.K.zero() for i in range(n)]
        g = [self.K.one()]
        for m in range(1, n):
            acc = self.K.zero()
            for k in range(1, m + 1):
                fk = f[k]
                if scalar_is_zero(fk):
                    continue
                acc = acc + (alpha * k - (m - k)) * fk * g[m - k]
            g.append(acc / m)
        return Series(self.K, g, n)

    def compose(self, r):
        """self(r(t)) for r with zero constant term."""
        if r.c and not scalar_is_zero(r.c[0]):
            raise AlgebraError("inner series must have zero constant term")
        vr = r.valuation()
        K = join_towers(self.K, r.K)
        s, r = self.lift(K), r.lift(K)
        if vr is None:
            prec = _minp(None if s.prec is None else s.prec, r.prec)
            return Series(K, s.c[:1], prec if prec is not None else 1)
        prec = None
        if s.prec is not None:
            prec = s.prec * vr
        if r.prec is not None:
            prec = _minp(prec, r.prec + vr * 0)
        n = len(s.c)
        if prec is None:
            # exact composition of polynomials
            acc = Series(K, [], None)
            for a in reversed(s.c):
                acc = acc * r + Series(K, [a], None)
            return acc
        acc = Series(K, [], prec)
        for i in range(n - 1, -1, -1):
            if i * vr >= prec:
                continue
            acc = (acc * r).truncate(prec) + Series(K, [s.c[i]], prec)
        return Series(K, acc.c, prec)

    def reverse(self, prec=None):
        """Compositional inverse r with self(r(t)) = t to the precision."""
        if len(self.c) < 2 or not scalar_is_zero(self.c[0]) or scalar_is_zero(self.c[1]):
            raise NonInvertibleSeriesError("series is not of the form c*t + ..., c != 0")
        n = _minp(self.prec, prec)
        if n is None:
            raise AlgebraError("reversion of an exact series needs a precision")
        K = self.K
        # Lagrange: [t^k] r = (1/k) [w^(k-1)] (w / s(w))^k
        q = self.shift(-1).truncate(n - 1) if n > 1 else Series(K, [self.c[1]], 1)
        phi = q.inverse(max(n - 1, 1))
        out = [K.zero()]
        pw = Series(K, [K.one()], max(n - 1, 1))
        for k in range(1, n):
            pw = (pw * phi).truncate(n - 1)
            out.append(pw[k - 1] / k)
        return Series(K, out, n)

    def __eq__(self, other):
        if not isinstance(other, Series):
            return NotImplemented
        p = _minp(self.prec, other.prec)
        n = max(len(self.c), len(other.c)) if p is None else p
        for i in range(n):
            a = self.c[i] if i < len(self.c) else 0
            b = other.c[i] if i < len(other.c) else 0
            if a != b:
                return False
        return self.prec == other.prec

    def __hash__(self):  # pragma: no cover - series are not used as keys
        return hash((len(self.c), self.prec))

    def __repr__(self):
        from .numbers import scalar_str
        terms = ["%s*t^%d" % (scalar_str(a), i) for i, a in enumerate(self.c) if not scalar_is_zero(a)]
        tail = "" if self.prec is None else " + O(t^%d)" % self.prec
        return "Series(" + (" + ".join(terms) or "0") + tail + ")"


def _mul_low(K, a, b, n):
    """First n coefficients of the product of two coefficient lists."""
    if n <= 0:
        return []
    if K.depth == 0:
        pa = fmpq_poly([fmpq(v) for v in a[:n]])
        pb = fmpq_poly([fmpq(v) for v in b[:n]])
        return list(pa.mul_low(pb, n).coeffs())
    d = K.degree
    s = 2 * d - 1
    M = K.modulus

    def pack(lst):
        flat = []
        for v in lst[:n]:
            cs = v.poly.coeffs()
            flat.extend(cs)
            flat.extend([0] * (s - len(cs)))
        return fmpq_poly(flat)

    prod = pack(a).mul_low(pack(b), n * s).coeffs()
    out = []
    for i in range(n):
        block = prod[i * s:(i + 1) * s]
        if not block:
            out.append(FieldElement(K, fmpq_poly([])))
            continue
        out.append(FieldElement(K, fmpq_poly(block) % M))
    return out


def evaluate_bipoly(F, X, Y, prec):
    """F(X(t), Y(t)) mod t^prec for a BiPoly F and series X, Y."""
    K = join_towers(F.K, X.K, Y.K)
    X, Y = X.lift(K), Y.lift(K)
    coeffs = F.lift(K).coeffs()
    if not coeffs:
        return Series(K, [], prec)
    by_j = {}
    for (i, j), c in coeffs.items():
        by_j.setdefault(j, {})[i] = c
    maxi = max(i for i, _ in coeffs)
    xp = [Series(K, [K.one()], None)]
    for _ in range(maxi):
        xp.append((xp[-1] * X).truncate(prec))
    acc = Series(K, [], prec)
    for j in range(max(by_j), -1, -1):
        acc = (acc * Y).truncate(prec)
        inner = by_j.get(j)
        if inner:
            part = Series(K, [], prec)
            for i, c in inner.items():
                part = part + xp[i].scale(c)
            acc = acc + part.truncate(prec)
    return Series(K, acc.c, _minp(acc.prec, prec))
