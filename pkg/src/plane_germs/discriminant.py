"""Jacobian curves, direct images under finite map germs and discriminants."""

from __future__ import annotations

import contextvars
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import gcd

from flint import fmpq

from .bipoly import BiPoly, TruncSeries
from .invariants import (INF, IntersectionNumber, intersection_multiplicity,
                         order_on_branch)
from .newton import (Edge, NewtonDiagram, PrecisionError,
                     canonical_constant_form, initial_newton_polynomial,
                     newton_diagram)
from .numbers import QQ, AlgebraError
from .puiseux import monic_from_roots, puiseux_expand
from .series import evaluate_bipoly


class ValidationError(AlgebraError):
    """A built-in cross-check of the direct image failed."""


def jacobian(f, g):
    """f_x g_y - f_y g_x; raises on an identically zero Jacobian."""
    J = f.derivative("x") * g.derivative("y") - f.derivative("y") * g.derivative("x")
    if J.is_zero():
        raise AlgebraError("Jacobian vanishes identically: f and g are dependent")
    return J


def check_map(f, g):
    if f.coefficient(0, 0) != 0 or g.coefficient(0, 0) != 0:
        raise AlgebraError("map germ must send the origin to the origin")
    if intersection_multiplicity(f, g, "resultant").infinite:
        raise AlgebraError("f and g share a component: the zero is not isolated")


@dataclass
class BranchImage:
    """Ledger row for one source branch (standing for its conjugates)."""

    kind: str                 # "curve", "u-axis" (image in u = 0) or "v-axis"
    i_f: IntersectionNumber   # ord_t f on the branch (i0 with f)
    i_g: IntersectionNumber
    degree: int               # d: reparametrization index of the image
    multiplicity: int
    conjugacy: int
    factor: object = None     # monic-in-v BiPoly (curve kind), mod u^P
    branch: object = field(default=None, repr=False)

    @property
    def weight(self):
        return self.multiplicity * self.conjugacy

    @property
    def quotient(self):
        """Hironaka quotient i0(g,p)/i0(f,p) (None for infinity)."""
        if self.i_f.infinite:
            return fmpq(0)
        if self.i_g.infinite:
            return None
        return fmpq(int(self.i_g), int(self.i_f))

    def to_json(self):
        return {"kind": self.kind, "i0_f": self.i_f.to_json(), "i0_g": self.i_g.to_json(),
                "degree": self.degree, "multiplicity": self.multiplicity,
                "conjugacy": self.conjugacy}


@dataclass
class DirectImage:
    equation: object          # TruncSeries in (u, v), or None for the empty curve
    precision: int
    ledger: list
    f: BiPoly
    g: BiPoly
    h: BiPoly
    attempts: list = field(default_factory=list)

    def is_unit(self):
        return self.equation is None

    @property
    def body(self):
        if self.equation is None:
            return BiPoly.const(1)
        return self.equation.body

    def axis_exponents(self):
        """Exact exponents (a, b) of u and v in the equation, read from the ledger."""
        a = sum(int(r.i_g) * r.weight for r in self.ledger if r.kind == "u-axis")
        b = sum(int(r.i_f) * r.weight for r in self.ledger if r.kind == "v-axis")
        return a, b

    def monomial_split(self):
        """(a, b, core) with equation = u^a v^b * core and core known below its precision."""
        a, b = self.axis_exponents()
        P = self.precision - a - b
        if P < 1:
            raise PrecisionError("precision %d does not reach the factor u^%d v^%d"
                                 % (self.precision, a, b))
        return a, b, TruncSeries(self.equation.body.divide_monomial(a, b).truncate(P), P)

    def canonical(self):
        if self.equation is None:
            return BiPoly.const(1)
        return canonical_constant_form(self)

    def diagram(self):
        if self.equation is None:
            return newton_diagram(BiPoly.const(1))
        return newton_diagram(self)

    def initial(self):
        if self.equation is None:
            return BiPoly.const(1)
        return initial_newton_polynomial(self)

    def to_str(self):
        if self.equation is None:
            return "1"
        return self.equation.to_str(("u", "v"))

    def to_json(self):
        from .report import diagram_json, poly_json
        out = {"equation": "1" if self.equation is None else self.body.to_str(("u", "v")),
               "precision": self.precision,
               "ledger": [r.to_json() for r in self.ledger]}
        if self.equation is not None:
            out["coefficients"] = poly_json(self.body)
            out["canonical"] = self.canonical().body.to_str(("u", "v")) \
                if isinstance(self.canonical(), TruncSeries) else self.canonical().to_str(("u", "v"))
        out["diagram"] = diagram_json(self.diagram())
        return out


def _exponent_gcd(*series):
    d = 0
    for s in series:
        for i in s.exponents():
            d = gcd(d, i)
    return d


def _push_branch(b, f, g, P, hdeg):
    """Ledger row and factor for the image of one branch, mod total degree P."""
    # a branch of a curve of degree hdeg meets f at most deg(f)*hdeg times
    a = order_on_branch(f, b, 16, f.total_degree() * hdeg + 1)
    c = order_on_branch(g, b, 16, g.total_degree() * hdeg + 1)
    if a is None and c is None:
        raise AlgebraError("branch lies in both f = 0 and g = 0")
    if a is None:
        row = BranchImage("u-axis", INF, IntersectionNumber(c), c, b.multiplicity, b.conjugacy,
                           BiPoly.monomial(c * b.conjugacy, 0, 1, QQ))
        row.branch = b
        return row
    if c is None:
        row = BranchImage("v-axis", IntersectionNumber(a), INF, a, b.multiplicity, b.conjugacy,
                           BiPoly.monomial(0, a * b.conjugacy, 1, QQ))
        row.branch = b
        return row
    n = a * P + a + 1
    x, y = b.param(n)
    U = evaluate_bipoly(f.lift(_join(f, b)), x, y, n)
    V = evaluate_bipoly(g.lift(_join(g, b)), x, y, n)
    lead = U[a]
    # U = lead * tau^a with tau = t (U / (lead t^a))^(1/a)
    W = U.shift(-a).truncate(a * P) / lead
    root = W.power(fmpq(1, a), a * P)
    tau = root.shift(1)
    T = tau.reverse(a * P + 1)
    Vt = V.truncate(a * P).compose(T).truncate(a * P)
    d = _exponent_gcd(U.truncate(a * P), V.truncate(a * P))
    factor = monic_from_roots(a, lead, Vt, b.base, P, trace=True)
    return BranchImage("curve", IntersectionNumber(a), IntersectionNumber(c), d,
                       b.multiplicity, b.conjugacy, factor, b)


def image_param(f, g, b, n):
    """(f, g) composed with a branch parametrization, mod t^n."""
    x, y = b.param(n)
    U = evaluate_bipoly(f.lift(_join(f, b)), x, y, n)
    V = evaluate_bipoly(g.lift(_join(g, b)), x, y, n)
    return U, V


def _join(f, b):
    from .numbers import join_towers
    return join_towers(f.K, b.K)


def _push_all(branches, f, g, P, hdeg):
    """Push every branch, one worker per branch; each worker sees the caller's
    context (tower cap, shear seed)."""
    if len(branches) < 2:
        return [_push_branch(b, f, g, P, hdeg) for b in branches]
    with ThreadPoolExecutor(max_workers=min(len(branches), 8)) as pool:
        futures = [pool.submit(contextvars.copy_context().run, _push_branch, b, f, g, P, hdeg)
                   for b in branches]
        return [fu.result() for fu in futures]


def direct_image(h, f, g, precision=None, branches=None):
    """Image of the curve h = 0 under (f, g), counted with degree and multiplicity."""
    if h.is_zero():
        raise AlgebraError("direct image of the zero germ")
    if h.coefficient(0, 0) != 0:
        return DirectImage(None, precision or 0, [], f, g, h)
    if precision is None:
        precision = sum(expected_orders(f, g, h)) + 2
    P = precision
    bs = list(branches if branches is not None else puiseux_expand(h, 4))
    ledger = _push_all(bs, f, g, P, h.total_degree())
    acc = TruncSeries(BiPoly.const(1), P)
    for row in ledger:
        piece = row.factor.truncate(P)
        for _ in range(row.multiplicity):
            acc = TruncSeries((acc.body * piece).truncate(P), P)
    return DirectImage(acc, P, ledger, f, g, h)


def _split_by_factors(h, f, g):
    """h = hf * hg * hr: components of h inside f = 0, inside g = 0, and the rest."""
    one = BiPoly.const(1)
    if h.K.depth or f.K.depth or g.K.depth:
        return None
    hf, hg, hr = one, one, one
    _, facs = h.p.factor()
    for q, e in facs:
        Q = BiPoly(QQ, q) ** int(e)
        if not f.p.gcd(q).is_constant():
            hf = hf * Q
        elif not g.p.gcd(q).is_constant():
            hg = hg * Q
        else:
            hr = hr * Q
    return hf, hg, hr


def expected_orders(f, g, h):
    """(a, b, i0(f, hr), i0(g, hr)): the direct image is u^a v^b times a factor whose
    axis orders are the last two numbers (projection formula, by resultants)."""
    parts = _split_by_factors(h, f, g)
    if parts is None:
        i_f = intersection_multiplicity(f, h, "resultant")
        i_g = intersection_multiplicity(g, h, "resultant")
        if i_f.infinite or i_g.infinite:
            raise AlgebraError("curve shares a component with f or g over an extension")
        return 0, 0, int(i_f), int(i_g)
    hf, hg, hr = parts
    return (int(intersection_multiplicity(g, hf, "resultant")),
            int(intersection_multiplicity(f, hg, "resultant")),
            int(intersection_multiplicity(f, hr, "resultant")),
            int(intersection_multiplicity(g, hr, "resultant")))


def _core_orders(img):
    """(a, b, ord_v core(0,v), ord_u core(u,0)) with None where not certified."""
    a, b = img.axis_exponents()
    body, P = img.equation.body, img.precision
    if any(i < a or j < b for (i, j) in body.support()):
        return a, b, None, None
    P -= a + b
    core = body.divide_monomial(a, b)
    js = [j for (i, j) in core.support() if i == 0]
    is_ = [i for (i, j) in core.support() if j == 0]
    oj = min(js) if js and min(js) < P else None
    oi = min(is_) if is_ and min(is_) < P else None
    return a, b, oj, oi


def discriminant_at_precision(f, g, P, J=None, branches=None):
    J = jacobian(f, g) if J is None else J
    img = direct_image(J, f, g, P, branches)
    return img


def discriminant(f, g, precision=None, max_factor=8):
    """The discriminant curve of (f, g) as a validated direct image of Jac."""
    check_map(f, g)
    J = jacobian(f, g)
    if J.coefficient(0, 0) != 0:
        return DirectImage(None, 0, [], f, g, J)
    expected = expected_orders(f, g, J)
    P0 = precision or sum(expected) + 2
    P = P0
    branches = puiseux_expand(J, 4)
    attempts = []
    while P <= max_factor * P0:
        img = direct_image(J, f, g, P, branches)
        got = _core_orders(img)
        attempts.append((P,) + got)
        if got == expected:
            img.attempts = attempts
            return img
        P *= 2
    raise ValidationError("projection-formula validation failed: observed (a, b, i0(u,D'), i0(v,D')) = %s, "
                          "expected %s; attempts %s" % (attempts[-1][1:], expected, attempts))


def diagram_from_ledger(ledger):
    """Newton diagram assembled from per-branch intersection pairs."""
    si = sj = 0
    segs = {}
    for r in ledger:
        w = r.weight
        if r.kind == "u-axis":
            si += int(r.i_g) * w
        elif r.kind == "v-axis":
            sj += int(r.i_f) * w
        else:
            a, b = int(r.i_f), int(r.i_g)
            q = fmpq(b, a)
            A, B = segs.get(q, (0, 0))
            segs[q] = (A + a * w, B + b * w)
    top = sj + sum(A for A, _ in segs.values())
    cur = (si, top)
    verts = [cur]
    edges = []
    for q in sorted(segs):
        A, B = segs[q]
        nxt = (cur[0] + B, cur[1] - A)
        edges.append(Edge(cur, nxt, q))
        verts.append(nxt)
        cur = nxt
    return NewtonDiagram(tuple(verts), tuple(edges), (si, sj))


def jacobian_newton_diagram(f, g, disc=None):
    """Delta(D), cross-checked against the diagram built from the ledger."""
    disc = discriminant(f, g) if disc is None else disc
    if disc.is_unit():
        return newton_diagram(BiPoly.const(1))
    a = disc.diagram()
    b = diagram_from_ledger(disc.ledger)
    if a != b:
        raise ValidationError("Newton diagram %s disagrees with ledger diagram %s" % (a, b))
    return a


@dataclass
class HironakaFactor:
    quotient: object                 # fmpq, or None for infinity
    branches: list
    i_f: IntersectionNumber
    i_g: IntersectionNumber

    def to_json(self):
        from .numbers import rational_str
        return {"quotient": "inf" if self.quotient is None else rational_str(self.quotient),
                "branches": self.branches,
                "totals": [self.i_f.to_json(), self.i_g.to_json()]}


def hironaka_factorization(h, f, g, image=None):
    """Branches of h grouped by i0(g,p)/i0(f,p), in increasing order."""
    if image is None:
        image = direct_image(h, f, g)
    groups = {}
    for idx, r in enumerate(image.ledger):
        key = r.quotient
        grp = groups.setdefault(key, [[], IntersectionNumber(0), IntersectionNumber(0)])
        grp[0].append(idx)
        grp[1] = grp[1] + r.i_f * r.weight
        grp[2] = grp[2] + r.i_g * r.weight
    keys = sorted((k for k in groups if k is not None))
    if None in groups:
        keys.append(None)
    out = [HironakaFactor(k, groups[k][0], groups[k][1], groups[k][2]) for k in keys]
    if image.equation is not None:
        _check_edges(out, image)
    return out


def _check_edges(factors, image):
    """The curve-type groups must reproduce the compact edges of the image diagram."""
    d = image.diagram()
    want = {}
    for e in d.compact_edges:
        want[e.inclination] = (e.start[1] - e.end[1], e.end[0] - e.start[0])
    got = {}
    for fct in factors:
        if fct.quotient is None or fct.i_f.infinite or fct.quotient == 0:
            continue
        got[fct.quotient] = (int(fct.i_f), int(fct.i_g))
    if got != want:
        raise ValidationError("Hironaka totals %s do not match the edges %s" % (got, want))
