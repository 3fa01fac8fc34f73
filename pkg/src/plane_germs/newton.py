"""Newton diagrams, initial Newton polynomials and quasi-homogeneous factorization."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from flint import fmpq

from .bipoly import BiPoly, TruncSeries
from .numbers import (QQ, AlgebraError, CapacityError, join_towers, rational_str,
                      simplify, tower_of)
from .upoly import UniPoly, roots_in_field, uni_factor


class PrecisionError(AlgebraError):
    """A truncated series does not carry enough terms for the request."""


@dataclass(frozen=True)
class Edge:
    start: tuple
    end: tuple
    inclination: fmpq

    def lattice_points(self):
        (i1, j1), (i2, j2) = self.start, self.end
        g = gcd(i2 - i1, j1 - j2)
        di, dj = (i2 - i1) // g, (j1 - j2) // g
        return [(i1 + s * di, j1 - s * dj) for s in range(g + 1)]

    def contains(self, p):
        (i1, j1), (i2, j2) = self.start, self.end
        i, j = p
        if not (i1 <= i <= i2 and j2 <= j <= j1):
            return False
        return (i - i1) * (j1 - j2) == (j1 - j) * (i2 - i1)

    def weight(self):
        """Weight (k, l) for which this edge is a level set of a*k + b*l."""
        q = self.inclination
        return (int(q.q), int(q.p))

    def to_json(self):
        return {"from": [int(c) for c in self.start], "to": [int(c) for c in self.end],
                "inclination": rational_str(self.inclination)}


@dataclass(frozen=True)
class NewtonDiagram:
    vertices: tuple
    compact_edges: tuple
    axis_exponents: tuple

    def is_empty(self):
        """True for the diagram of a unit."""
        return self.vertices == ((0, 0),)

    def inclinations(self):
        return [e.inclination for e in self.compact_edges]

    def on_boundary(self, p):
        if not self.compact_edges:
            return p == self.vertices[0]
        return any(e.contains(p) for e in self.compact_edges)

    def edge_with_inclination(self, q):
        q = fmpq(q)
        for e in self.compact_edges:
            if e.inclination == q:
                return e
        return None

    def to_json(self):
        return {"vertices": [[int(c) for c in v] for v in self.vertices],
                "compact_edges": [e.to_json() for e in self.compact_edges],
                "axis_exponents": {"u": int(self.axis_exponents[0]), "v": int(self.axis_exponents[1])}}

    def __str__(self):
        parts = ["vertices " + ", ".join("(%d,%d)" % v for v in self.vertices)]
        for e in self.compact_edges:
            parts.append("edge (%d,%d)-(%d,%d) inclination %s" % (e.start + e.end + (rational_str(e.inclination),)))
        return "; ".join(parts)


def hull_from_points(points):
    """Lower-left boundary of the union of quadrants p + R^2_{>=0}."""
    pts = set(points)
    if not pts:
        raise AlgebraError("Newton diagram of zero")
    imin = min(i for i, _ in pts)
    jmin = min(j for _, j in pts)
    left = (imin, min(j for i, j in pts if i == imin))
    right = (min(i for i, j in pts if j == jmin), jmin)
    verts = [left]
    edges = []
    cur = left
    while cur != right:
        best, best_q = None, None
        for p in pts:
            if p[1] >= cur[1]:
                continue
            q = fmpq(p[0] - cur[0], cur[1] - p[1])
            if best is None or q < best_q or (q == best_q and p[1] < best[1]):
                best, best_q = p, q
        edges.append(Edge(cur, best, best_q))
        verts.append(best)
        cur = best
    return NewtonDiagram(tuple(verts), tuple(edges), (imin, jmin))


def _split(f):
    if isinstance(f, TruncSeries):
        return f.body, f.precision
    return f, None


def _factored(f):
    """(a, b, rest) for objects that know an exact monomial factor u^a v^b."""
    if hasattr(f, "monomial_split"):
        return f.monomial_split()
    return 0, 0, f


def _shift(d, a, b):
    if not (a or b):
        return d
    verts = tuple((i + a, j + b) for i, j in d.vertices)
    edges = tuple(Edge((e.start[0] + a, e.start[1] + b), (e.end[0] + a, e.end[1] + b), e.inclination)
                  for e in d.compact_edges)
    return NewtonDiagram(verts, edges, (d.axis_exponents[0] + a, d.axis_exponents[1] + b))


def _check_precision(diagram, prec):
    if prec is None:
        return
    for v in diagram.vertices:
        if v[0] + v[1] >= prec:
            raise PrecisionError("vertex %s not certified below precision %d" % (v, prec))
    for e in diagram.compact_edges:
        for p in e.lattice_points():
            if p[0] + p[1] >= prec:
                raise PrecisionError("edge point %s not certified below precision %d" % (p, prec))
    # the unbounded rays are certified only on the axes
    top, bottom = diagram.vertices[0], diagram.vertices[-1]
    if top[0] > 0:
        raise PrecisionError("terms left of vertex %s are not certified at precision %d" % (top, prec))
    if bottom[1] > 0:
        raise PrecisionError("terms below vertex %s are not certified at precision %d" % (bottom, prec))


def newton_diagram(f):
    """Newton diagram of a nonzero BiPoly or TruncSeries."""
    a, b, f = _factored(f)
    body, prec = _split(f)
    if body.is_zero():
        if prec is not None:
            raise PrecisionError("series vanishes to its precision %d" % prec)
        raise AlgebraError("Newton diagram of the zero germ")
    d = hull_from_points(body.support())
    _check_precision(d, prec)
    return _shift(d, a, b)


def initial_newton_polynomial(f):
    """Sum of the terms of f lying on the compact edges of its diagram."""
    a, b, f = _factored(f)
    body, _ = _split(f)
    d = newton_diagram(f)
    ini = body.filter_terms(lambda i, j: d.on_boundary((i, j)))
    return ini * BiPoly.monomial(a, b, 1, ini.K) if (a or b) else ini


def check_weight(w):
    k, l = int(w[0]), int(w[1])
    if k <= 0 or l <= 0 or gcd(k, l) != 1:
        raise ValueError("weight (%d,%d) must be coprime positive integers" % (k, l))
    return k, l


def weighted_degree(p, w):
    return p[0] * w[0] + p[1] * w[1]


def weighted_initial_form(f, w):
    """Lowest-degree quasi-homogeneous part for deg(u^a v^b) = a*k + b*l."""
    k, l = check_weight(w)
    a0, b0, f = _factored(f)
    body, prec = _split(f)
    supp = body.support()
    if not supp:
        if prec is not None:
            raise PrecisionError("series vanishes to its precision %d" % prec)
        raise AlgebraError("weighted initial form of zero")
    m = min(a * k + b * l for a, b in supp)
    if prec is not None and m >= prec * min(k, l):
        raise PrecisionError("minimal weighted degree %d not certified at precision %d" % (m, prec))
    out = body.filter_terms(lambda a, b: a * k + b * l == m)
    return out * BiPoly.monomial(a0, b0, 1, out.K) if (a0 or b0) else out


@dataclass
class EdgeRoot:
    """A root t of the edge polynomial with its exponent nu.

    ``conjugates`` counts the roots represented (the degree of ``factor``,
    the monic irreducible factor over the input field that t is a root of).
    """

    t: object
    nu: int
    factor: UniPoly
    conjugates: int = 1


@dataclass
class QuasiHomogFactorization:
    C: object
    nu0: int
    nu_last: int
    roots: list
    weight: tuple
    field: object = None

    def reconstruct(self):
        k, l = self.weight
        K = self.field
        acc = BiPoly.monomial(self.nu0, self.nu_last, self.C, K)
        for r in self.roots:
            d = r.factor.degree
            hom = {}
            for j, c in enumerate(r.factor.coeffs):
                if c != 0:
                    hom[(l * (d - j), k * j)] = c
            acc = acc * (BiPoly.from_dict(hom, K) ** r.nu)
        return acc

    def all_roots(self):
        return [(r.t, r.nu) for r in self.roots]

    def to_json(self):
        from .numbers import describe_scalar
        return {"weight": list(self.weight), "C": describe_scalar(self.C),
                "nu0": self.nu0, "nu_last": self.nu_last,
                "roots": [{"t": describe_scalar(r.t), "nu": r.nu, "conjugates": r.conjugates,
                           "factor": [str(simplify(c)) for c in r.factor.coeffs]}
                          for r in self.roots]}


def edge_polynomial(P, w):
    """Split a quasi-homogeneous P into (C-free data): nu0, nu_last and Q(T)."""
    k, l = check_weight(w)
    coeffs = P.coeffs()
    if not coeffs:
        raise AlgebraError("edge polynomial of zero")
    degs = {a * k + b * l for a, b in coeffs}
    if len(degs) != 1:
        raise AlgebraError("polynomial is not quasi-homogeneous for weight (%d,%d)" % (k, l))
    nu0 = min(a for a, _ in coeffs)
    nul = min(b for _, b in coeffs)
    N = None
    terms = {}
    for (a, b), c in coeffs.items():
        a2, b2 = a - nu0, b - nul
        if a2 % l or b2 % k:
            raise AlgebraError("unexpected monomial in quasi-homogeneous polynomial")
        s = a2 // l
        n_here = s + b2 // k
        N = n_here if N is None else N
        if n_here != N:
            raise AlgebraError("inconsistent quasi-homogeneous degree")  # pragma: no cover
        terms[N - s] = c
    Q = UniPoly([terms.get(i, 0) for i in range(N + 1)])
    return nu0, nul, Q


def factor_edge(P, w):
    """Exact factorization C u^nu0 v^nu_last prod (v^k - t_i u^l)^nu_i."""
    k, l = check_weight(w)
    body, _ = _split(P)
    nu0, nul, Q = edge_polynomial(body, (k, l))
    K = body.K
    C = Q.lc()
    roots = []
    if Q.degree > 0:
        fac = uni_factor(Q.monic(), K)
        for f, e in fac:
            if f.degree == 1:
                t = simplify(-f.coeffs[0] / f.coeffs[1])
                roots.append(EdgeRoot(t, e, f, 1))
            else:
                L = K.adjoin([K.lift(c) for c in f.coeffs])
                roots.append(EdgeRoot(L.generator(), e, f, f.degree))
    return QuasiHomogFactorization(simplify(C), nu0, nul, roots, (k, l), K)


# -- rescaling -------------------------------------------------------------

@dataclass
class RescaleWitness:
    solvable: bool
    witness: tuple = None
    obstruction: dict = None
    note: str = ""

    def to_json(self):
        from .numbers import describe_scalar
        out = {"solvable": self.solvable}
        if self.witness is not None:
            out["witness"] = [describe_scalar(a) for a in self.witness]
        if self.obstruction is not None:
            out["obstruction"] = {
                "text": relation_str(self.obstruction["relation"]),
                "relation": [[list(p), lam] for p, lam in self.obstruction["relation"]],
                "ratio_product": describe_scalar(self.obstruction["value"]),
            }
        if self.note:
            out["note"] = self.note
        return out


def relation_str(rel):
    out = ""
    for (i, j), lam in rel:
        sign = "+" if lam > 0 else "-"
        mag = "" if abs(lam) == 1 else str(abs(lam))
        out += "%s%s(%d,%d)" % (sign, mag, i, j)
    return out.lstrip("+") + "=0"


def _integer_column_echelon(cols):
    """Column-reduce a 2 x n integer matrix.

    Returns (H, U): H lists the nonzero echelon columns and U the unimodular
    transform, as lists of column vectors, with the kernel basis being the
    columns of U beyond len(H).
    """
    n = len(cols)
    A = [list(c) for c in cols]
    U = [[1 if i == j else 0 for i in range(n)] for j in range(n)]
    pivot_cols = 0
    for row in range(2):
        # euclid among columns pivot_cols..n-1 on this row
        while True:
            nz = [c for c in range(pivot_cols, n) if A[c][row] != 0]
            if len(nz) <= 1:
                break
            nz.sort(key=lambda c: abs(A[c][row]))
            p = nz[0]
            for c in nz[1:]:
                q = A[c][row] // A[p][row]
                A[c] = [a - q * b for a, b in zip(A[c], A[p])]
                U[c] = [a - q * b for a, b in zip(U[c], U[p])]
        nz = [c for c in range(pivot_cols, n) if A[c][row] != 0]
        if nz:
            c = nz[0]
            A[pivot_cols], A[c] = A[c], A[pivot_cols]
            U[pivot_cols], U[c] = U[c], U[pivot_cols]
            if A[pivot_cols][row] < 0:
                A[pivot_cols] = [-a for a in A[pivot_cols]]
                U[pivot_cols] = [-a for a in U[pivot_cols]]
            pivot_cols += 1
    return A[:pivot_cols], U


def _char_value(ratios, lam):
    acc = 1
    for r, e in zip(ratios, lam):
        if e:
            acc = acc * (r ** e)
    return simplify(acc)


def _root_of(value, n, K):
    """An n-th root of value in K or a small extension (or None past the cap)."""
    if n == 1:
        return value
    coeffs = [-K.lift(value)] + [0] * (n - 1) + [1]
    poly = UniPoly([K.lift(c) for c in coeffs])
    roots = roots_in_field(poly, K)
    if roots:
        return roots[0][0]
    fac = uni_factor(poly, K)
    f = min((f for f, _ in fac), key=lambda f: f.degree)
    L = K.adjoin([K.lift(c) for c in f.coeffs])
    return L.generator()


def rescale_equal(p, q, up_to_constant=False):
    """Decide whether q(x, y) = p(a x, b y) for nonzero constants a, b.

    With ``up_to_constant`` the question is q = c * p(a x, b y); the witness
    is then (a, b, c).
    """
    p, _ = _split(p)
    q, _ = _split(q)
    if p.is_zero() or q.is_zero():
        raise AlgebraError("rescale test needs nonzero polynomials")
    cp, cq = p.coeffs(), q.coeffs()
    if set(cp) != set(cq):
        return RescaleWitness(False, note="supports differ")
    pts = sorted(cp)
    ratios = [simplify(cq[s] / cp[s]) for s in pts]
    base = (0, 0)
    if up_to_constant:
        # c a^i0 b^j0 = r_0, so r_s / r_0 = a^(i-i0) b^(j-j0)
        base, r0 = pts[0], ratios[0]
        pts = [(i - base[0], j - base[1]) for i, j in pts[1:]]
        ratios = [simplify(r / r0) for r in ratios[1:]]
    H, U = _integer_column_echelon(pts)
    rank = len(H)
    for lam in U[rank:]:
        val = _char_value(ratios, lam)
        if val != 1:
            if lam[max(i for i in range(len(pts)) if lam[i])] > 0:
                lam = [-e for e in lam]
                val = simplify(1 / val)
            rel = [((pts[i][0] + base[0], pts[i][1] + base[1]), lam[i]) for i in range(len(pts)) if lam[i]]
            if up_to_constant and sum(lam):
                rel.append((base, -sum(lam)))
            rel.sort(key=lambda pe: (-pe[1], -pe[0][0]))
            return RescaleWitness(False, obstruction={"relation": rel, "value": val})
    K = join_towers(*[tower_of(r) for r in ratios]) if ratios else QQ
    chi = [_char_value(ratios, U[c]) for c in range(rank)]
    try:
        a, b = 1, 1
        if rank == 2:
            (g1, x1), (_, g2) = H[0], H[1]
            b = _root_of(chi[1], g2, K)
            Kb = join_towers(K, tower_of(b))
            a = _root_of(Kb.lift(chi[0]) / Kb.lift(b) ** x1, g1, Kb)
        elif rank == 1:
            i1, j1 = H[0]
            if i1 != 0:
                a = _root_of(chi[0], i1, K)
            else:
                b = _root_of(chi[0], j1, K)
    except CapacityError:
        return RescaleWitness(True, None, note="witness omitted: tower cap exceeded")
    a, b = simplify(a), simplify(b)
    if not up_to_constant:
        return RescaleWitness(True, (a, b))
    c = simplify(r0 / (a ** base[0] * b ** base[1]))
    return RescaleWitness(True, (a, b, c))


def equal_up_to_constant(p, q):
    """Return c with q = c*p, or None."""
    cp, cq = p.coeffs(), q.coeffs()
    if set(cp) != set(cq) or not cp:
        return None
    key = min(cp)
    c = cq[key] / cp[key]
    if (p * c) == q:
        return simplify(c)
    return None


def canonical_constant_form(p):
    """p scaled so that the coefficient at the lexicographically smallest
    support point of its initial Newton polynomial is 1."""
    ini = initial_newton_polynomial(p)
    cs = ini.coeffs()
    key = min(cs)
    if hasattr(p, "monomial_split"):
        p = p.equation
    body, prec = _split(p)
    scaled = body * (1 / cs[key])
    if prec is not None:
        return TruncSeries(scaled, prec)
    return scaled
