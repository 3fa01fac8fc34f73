"""Univariate polynomials, Sylvester resultants and factorization over towers."""

from __future__ import annotations

import contextlib
import contextvars

from flint import fmpq, fmpq_mpoly_ctx, fmpq_poly, fmpz

from .numbers import (QQ, AlgebraError, CapacityError, FieldElement,
                      join_towers, scalar_is_zero, scalar_str, simplify,
                      tower_of)


class UndefinedResultantError(AlgebraError):
    """Both resultant arguments are zero."""


_factor_cap = contextvars.ContextVar("max_factor_degree", default=96)


def max_factor_degree():
    return _factor_cap.get()


@contextlib.contextmanager
def factor_degree_cap(n):
    token = _factor_cap.set(int(n))
    try:
        yield
    finally:
        _factor_cap.reset(token)


def _is_zero(a):
    if isinstance(a, (int, fmpq, fmpz, FieldElement)):
        return scalar_is_zero(a)
    if hasattr(a, "is_zero"):
        return a.is_zero()
    if hasattr(a, "body"):
        return a.body.is_zero()
    return a == 0


class UniPoly:
    """Dense univariate polynomial; ``coeffs[k]`` multiplies s^k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs):
        coeffs = [fmpq(c) if isinstance(c, (int, fmpz)) else c for c in coeffs]
        while coeffs and _is_zero(coeffs[-1]):
            coeffs.pop()
        self.coeffs = coeffs

    @staticmethod
    def from_fmpq_poly(p, K=QQ):
        return UniPoly([K.lift(c) for c in p.coeffs()])

    @property
    def degree(self):
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def lc(self):
        return self.coeffs[-1]

    def tower(self):
        return join_towers(*[tower_of(c) for c in self.coeffs]) if self.coeffs else QQ

    def lift(self, K):
        return UniPoly([K.lift(c) for c in self.coeffs])

    def __call__(self, s):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * s + c
        return acc

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly([(a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)])

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs])

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, UniPoly):
            return UniPoly([c * other for c in self.coeffs])
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly([])
        out = [None] * (len(a) + len(b) - 1)
        for i, ai in enumerate(a):
            if _is_zero(ai):
                continue
            for j, bj in enumerate(b):
                t = ai * bj
                out[i + j] = t if out[i + j] is None else out[i + j] + t
        zero = a[0] * 0
        return UniPoly([zero if v is None else v for v in out])

    __rmul__ = __mul__

    def __pow__(self, n):
        result = UniPoly([self.coeffs[0] * 0 + 1]) if self.coeffs else UniPoly([1])
        for _ in range(int(n)):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, UniPoly):
            return NotImplemented
        if len(self.coeffs) != len(other.coeffs):
            return False
        return all(a == b for a, b in zip(self.coeffs, other.coeffs))

    def __hash__(self):  # pragma: no cover
        return hash(len(self.coeffs))

    def derivative(self):
        return UniPoly([c * i for i, c in enumerate(self.coeffs)][1:])

    def monic(self):
        inv = 1 / self.lc()
        return UniPoly([c * inv for c in self.coeffs])

    def divmod(self, other):
        """Euclidean division over a field."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        r = list(self.coeffs)
        q = [0] * max(len(r) - len(other.coeffs) + 1, 0)
        inv = 1 / other.lc()
        db = other.degree
        for k in range(len(r) - 1, db - 1, -1):
            c = r[k]
            if _is_zero(c):
                continue
            f = c * inv
            q[k - db] = f
            for i, b in enumerate(other.coeffs):
                r[k - db + i] = r[k - db + i] - f * b
        return UniPoly(q), UniPoly(r[:db] if db > 0 else [])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def taylor_shift(self, c):
        """The polynomial p(s + c)."""
        out = UniPoly([])
        lin = UniPoly([c, 1])
        for a in reversed(self.coeffs):
            out = out * lin + UniPoly([a])
        return out

    def to_str(self, var="s"):
        parts = []
        for k, c in reversed(list(enumerate(self.coeffs))):
            if _is_zero(c):
                continue
            cs = scalar_str(c) if isinstance(c, (int, fmpq, fmpz, FieldElement)) else "(%s)" % c
            mon = "" if k == 0 else (var if k == 1 else "%s^%d" % (var, k))
            parts.append(cs + ("*" + mon if mon else ""))
        return " + ".join(parts) or "0"

    def __repr__(self):
        return "UniPoly(%s)" % self.to_str()


def poly_gcd(a, b):
    """Monic gcd over a field."""
    while not b.is_zero():
        a, b = b, a % b
    if a.is_zero():
        return a
    return a.monic()


def sylvester_matrix(p, q):
    """Rows: deg q shifted copies of p, then deg p shifted copies of q.

    Coefficients run from the leading one down, the usual layout.
    """
    m, n = p.degree, q.degree
    size = m + n
    zero = (p.coeffs or q.coeffs)[0] * 0
    rows = []
    pc = list(reversed(p.coeffs))
    qc = list(reversed(q.coeffs))
    for i in range(n):
        row = [zero] * size
        for k, c in enumerate(pc):
            row[i + k] = c
        rows.append(row)
    for i in range(m):
        row = [zero] * size
        for k, c in enumerate(qc):
            row[i + k] = c
        rows.append(row)
    return rows


def _field_det(A):
    n = len(A)
    A = [list(r) for r in A]
    det = fmpq(1)
    for col in range(n):
        piv = None
        for r in range(col, n):
            if not _is_zero(A[r][col]):
                piv = r
                break
        if piv is None:
            return A[0][0] * 0 if n else 0
        if piv != col:
            A[col], A[piv] = A[piv], A[col]
            det = -det
        pv = A[col][col]
        det = det * pv
        inv = 1 / pv
        for r in range(col + 1, n):
            f = A[r][col]
            if _is_zero(f):
                continue
            f = f * inv
            for k in range(col, n):
                A[r][k] = A[r][k] - f * A[col][k]
    return det


def berkowitz_det(A):
    """Division-free determinant over any commutative ring."""
    n = len(A)
    if n == 0:
        return 1
    one = A[0][0] * 0 + 1
    vect = [one, -A[0][0]]
    for r in range(1, n):
        a = A[r][r]
        R = [A[r][j] for j in range(r)]
        C = [A[i][r] for i in range(r)]
        sub = [row[:r] for row in A[:r]]
        q = [one, -a]
        cur = C
        for _ in range(r):
            q.append(-sum((R[j] * cur[j] for j in range(r)), A[0][0] * 0))
            cur = [sum((sub[i][j] * cur[j] for j in range(r)), A[0][0] * 0) for i in range(r)]
        new = []
        for i in range(r + 2):
            acc = A[0][0] * 0
            for j in range(min(i, r) + 1):
                if j < len(vect):
                    acc = acc + q[i - j] * vect[j]
            new.append(acc)
        vect = new
    cn = vect[n]
    return cn if n % 2 == 0 else -cn


def resultant(p, q):
    """Sylvester-determinant resultant; p's rows come first."""
    if p.is_zero() and q.is_zero():
        raise UndefinedResultantError("resultant of two zero polynomials")
    if p.is_zero() or q.is_zero():
        return (p.coeffs or q.coeffs)[0] * 0
    if p.degree == 0 and q.degree == 0:
        return p.coeffs[0] * 0 + 1
    A = sylvester_matrix(p, q)
    if all(isinstance(c, (int, fmpq, fmpz, FieldElement)) for c in p.coeffs + q.coeffs):
        return simplify(_field_det(A))
    return berkowitz_det(A)


# -- square-free decomposition and factorization ---------------------------

def squarefree_decomposition(p):
    """Yun's algorithm over a field of characteristic zero: [(part, multiplicity)]."""
    out = []
    if p.degree <= 0:
        return out
    p = p.monic()
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a - b.derivative()
    k = 1
    while b.degree > 0:
        d = poly_gcd(b, c)
        if d.degree > 0:
            out.append((d, k))
        b2 = b // d
        c = c // d - b2.derivative() if not c.is_zero() else c
        b = b2
        k += 1
    return out


def _rational_factor(p):
    fp = fmpq_poly([fmpq(simplify(c)) for c in p.coeffs])
    _, facs = fp.factor()
    out = []
    for f, e in facs:
        f = f / f.leading_coefficient()
        out.append((UniPoly([c for c in f.coeffs()]), e))
    return out


def _norm(p, K, c):
    """Res_z(M(z), p(s - c z)) for p over K = Q(theta)."""
    ctx = fmpq_mpoly_ctx.get(("z", "s"), "lex")
    z, s = ctx.gens()
    M = ctx.from_dict({(i, 0): v for i, v in enumerate(K.modulus.coeffs()) if v != 0})
    shifted = s - c * z
    P = ctx.from_dict({})
    for j, a in enumerate(p.coeffs):
        a = K.lift(a)
        cz = ctx.from_dict({(i, 0): v for i, v in enumerate(a.poly.coeffs()) if v != 0})
        P = P + cz * shifted ** j
    N = M.resultant(P, "z")
    d = N.to_dict()
    deg = max((k for (_, k) in d), default=0)
    return fmpq_poly([d.get((0, k), 0) for k in range(deg + 1)])


def _trager(p, K):
    """Irreducible factors over K of a monic square-free p."""
    deg = p.degree * K.degree
    cap = max_factor_degree()
    if deg > cap:
        raise CapacityError("factorization norm degree %d exceeds the cap max_factor_degree=%d"
                            % (deg, cap))
    theta = K.theta()
    for c in [0, 1, -1, 2, -2, 3, -3, 4, 5, 7, 11]:
        N = _norm(p, K, c)
        if N.degree() != deg:
            continue
        if N.gcd(N.derivative()).degree() > 0:
            continue
        g = p.taylor_shift(-c * theta) if c else p
        _, facs = N.factor()
        if len(facs) == 1:
            return [p]
        out = []
        for f, _ in facs:
            fk = UniPoly([K.lift(v) for v in f.coeffs()])
            h = poly_gcd(g, fk)
            if c:
                h = h.taylor_shift(c * theta)
            out.append(h.monic())
        return out
    raise AlgebraError("no suitable shift for the norm")  # pragma: no cover


class Factorization:
    """``constant * prod(factor ** multiplicity)``."""

    def __init__(self, constant, factors):
        self.constant = constant
        self.factors = factors

    def __iter__(self):
        return iter(self.factors)

    def __len__(self):
        return len(self.factors)

    def expand(self):
        acc = UniPoly([self.constant])
        for f, e in self.factors:
            acc = acc * (f ** e)
        return acc

    def __repr__(self):
        return "Factorization(%s; %s)" % (scalar_str(self.constant),
                                          ", ".join("(%s)^%d" % (f.to_str(), e) for f, e in self.factors))


def _sort_key(f):
    return (f.degree, [str(simplify(c)) for c in f.coeffs])


def uni_factor(p, K=None):
    """Factor a nonzero univariate polynomial over the tower of its coefficients."""
    if p.is_zero():
        raise AlgebraError("cannot factor the zero polynomial")
    K = K or p.tower()
    p = p.lift(K)
    const = p.lc()
    if p.degree == 0:
        return Factorization(simplify(const), [])
    cap = max_factor_degree()
    if p.degree * K.degree > cap:
        raise CapacityError("factorization degree %d exceeds the cap max_factor_degree=%d"
                            % (p.degree * K.degree, cap))
    out = []
    if K.depth == 0:
        for f, e in _rational_factor(p):
            out.append((f, e))
    else:
        for part, e in squarefree_decomposition(p):
            if part.degree == 1:
                out.append((part, e))
                continue
            for f in _trager(part, K):
                out.append((f, e))
    out.sort(key=lambda fe: (_sort_key(fe[0]), fe[1]))
    return Factorization(simplify(const), out)


def roots_in_field(p, K=None):
    """Roots of p lying in its coefficient tower, with multiplicities."""
    fac = uni_factor(p, K)
    out = []
    for f, e in fac:
        if f.degree == 1:
            out.append((simplify(-f.coeffs[0] / f.coeffs[1]), e))
    return out
