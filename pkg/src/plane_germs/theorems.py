"""Instance checks of the discriminant theorems on concrete map germs."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from flint import fmpq, fmpq_mpoly_ctx

from .bipoly import BiPoly, TruncSeries
from .discriminant import (DirectImage, discriminant, discriminant_at_precision,
                           image_param, jacobian)
from .invariants import (INF, IntersectionNumber, MethodDisagreement, NonIsolatedError,
                         PrecisionTooLow, equisingular, equisingularity_type,
                         germ_order, intersection_multiplicity,
                         intersection_with_series, milnor_number)
from .newton import (check_weight, equal_up_to_constant, factor_edge,
                     initial_newton_polynomial, newton_diagram, rescale_equal,
                     weighted_initial_form)
from .numbers import (QQ, AlgebraError, CapacityError, descriptor_key, describe_scalar,
                      minimal_polynomial, rational_str, simplify)
from .series import Series
from .upoly import UniPoly, poly_gcd, uni_factor

HOLDS = "holds"
UP_TO_CONSTANT = "holds_up_to_constant"
FAILS = "fails"


class InconsistencyError(AlgebraError):
    """Two routes to one quantity disagree."""


@dataclass
class VerificationReport:
    claim: str
    inputs: dict
    artifacts: dict
    verdict: str
    parameters: dict = field(default_factory=dict)
    counterexample: dict = None

    @property
    def ok(self):
        return self.verdict in (HOLDS, UP_TO_CONSTANT)

    def to_json(self):
        out = {"claim": self.claim, "inputs": self.inputs, "artifacts": self.artifacts,
               "verdict": self.verdict, "parameters": self.parameters}
        if self.counterexample is not None:
            out["counterexample"] = self.counterexample
        return out


def _s(p, names=("x", "y")):
    if isinstance(p, TruncSeries):
        return p.to_str(names)
    return p.to_str(names)


def _uv(p):
    return _s(p, ("u", "v"))


def _initial(disc):
    if disc.is_unit():
        return BiPoly.const(1)
    return initial_newton_polynomial(disc)


# -- tangent directions ------------------------------------------------------

def tangent_directions(p):
    """Tangent directions of a polynomial germ: (u-axis flag, monic radical in s = v/u)."""
    o = p.order()
    form = p.filter_terms(lambda i, j: i + j == o)
    cs = form.coeffs()
    # form(u, v) = u^a * prod (v - s u); dehomogenize at u = 1
    uni = UniPoly([cs.get((o - j, j), 0) for j in range(o + 1)])
    vertical = uni.degree < o
    if uni.degree <= 0:
        return vertical, UniPoly([1])
    rad = uni // poly_gcd(uni, uni.derivative())
    return vertical, rad.monic()


# -- Theorem: initial polynomials of discriminants ----------------------------

def perturb(f, g, u1, u2):
    return (BiPoly.const(1) + u1) * f, (BiPoly.const(1) + u2) * g


def verify_main_theorem(f, g, u1, u2, precision=None):
    """Compare Delta and the initial Newton polynomial of D for (f,g) and its perturbation."""
    for u in (u1, u2):
        if u.coefficient(0, 0) != 0:
            raise AlgebraError("perturbation must vanish at the origin")
    ft, gt = perturb(f, g, u1, u2)
    D = discriminant(f, g, precision)
    Dt = discriminant(ft, gt, precision)
    arts = {"D": D.to_str(), "D_perturbed": Dt.to_str()}
    if D.is_unit() or Dt.is_unit():
        same = D.is_unit() and Dt.is_unit()
        verdict = HOLDS if same else FAILS
        return VerificationReport("main_theorem", _inputs(f=f, g=g, u1=u1, u2=u2), arts, verdict,
                                  {"precision": [D.precision, Dt.precision]},
                                  None if same else {"unit_mismatch": True})
    d1, d2 = newton_diagram(D), newton_diagram(Dt)
    i1, i2 = initial_newton_polynomial(D), initial_newton_polynomial(Dt)
    strict = i1 == i2
    const = equal_up_to_constant(i1, i2)
    tangents = _same_tangents(i1, i2)
    arts.update({
        "diagram": d1.to_json(), "diagram_perturbed": d2.to_json(),
        "diagrams_equal": d1 == d2,
        "initial": _uv(i1), "initial_perturbed": _uv(i2),
        "initial_equal": strict,
        "initial_ratio": None if const is None else describe_scalar(const),
        "same_tangents": tangents,
    })
    if d1 == d2 and strict:
        verdict = HOLDS
    elif d1 == d2 and const is not None:
        verdict = UP_TO_CONSTANT
    else:
        verdict = FAILS
    cx = None
    if verdict == FAILS:
        cx = {"initial": _uv(i1), "initial_perturbed": _uv(i2),
              "diagram": d1.to_json(), "diagram_perturbed": d2.to_json()}
    return VerificationReport("main_theorem", _inputs(f=f, g=g, u1=u1, u2=u2), arts, verdict,
                              {"precision": [D.precision, Dt.precision]}, cx)


def _same_tangents(a, b):
    va, ra = tangent_directions(a)
    vb, rb = tangent_directions(b)
    return va == vb and ra == rb


def _inputs(**kw):
    return {k: _s(v) for k, v in kw.items()}


# -- pencils ----------------------------------------------------------------

def target_pencil(w, t, N):
    """H_t = (v^k - t u^l)^N - u^(l(N+1)) in (x, y) = (u, v)."""
    k, l = check_weight(w)
    K = _tower(t)
    u, v = BiPoly.x(K), BiPoly.y(K)
    return (v ** k - u ** l * t) ** N - u ** (l * (N + 1))


def source_pencil(f, g, w, t, N=None):
    """g^k - t f^l, or (g^k - t f^l)^N - f^(l(N+1)) when N is given."""
    k, l = check_weight(w)
    base = g ** k - (f ** l) * t
    if N is None:
        return base
    return base ** N - f ** (l * (N + 1))


def _tower(t):
    from .numbers import tower_of
    return tower_of(t)


def edge_roots(D, w):
    """factor_edge data of the w-initial form of D (None for the empty curve)."""
    if isinstance(D, DirectImage):
        if D.is_unit():
            return None
    k, l = check_weight(w)
    ini = weighted_initial_form(D, (k, l))
    return factor_edge(ini, (k, l))


def _reference_t(avoid):
    for n in itertools.count(1):
        q = fmpq(n)
        if all(simplify(a) != q for a in avoid):
            return q


def _pow_low(s, e, n):
    out = Series(s.K, [s.K.one()], None)
    base = s.truncate(n)
    while e:
        if e & 1:
            out = (out * base).truncate(n)
        e >>= 1
        if e:
            base = (base * base).truncate(n)
    return out


def _pencil_order(U, V, k, l, t, N, n):
    """ord_t H_t(U, V) computed mod t^n (None if not reached)."""
    A = _pow_low(V, k, n) - _pow_low(U, l, n).scale(t)
    R = (_pow_low(A, N, n) - _pow_low(U, l * (N + 1), n)).truncate(n)
    v = R.valuation()
    return v if v is not None and v < n else None


def _i0_image_pencil(D, k, l, t, N, cap=1 << 13):
    """i0(D, H_t) = sum over source branches of ord H_t(f, g) (projection formula)."""
    total = 0
    for r in D.ledger:
        n = 64
        while True:
            U, V = image_param(D.f, D.g, r.branch, n)
            o = _pencil_order(U, V, k, l, t, N, n)
            if o is not None:
                total += o * r.weight
                break
            n *= 2
            if n > cap:
                raise InconsistencyError("test curve appears to contain a branch of D")
    return IntersectionNumber(total)


def _i0_D(D, H):
    """i0(D, H) with D a validated discriminant, a series or a polynomial."""
    if isinstance(D, BiPoly):
        return intersection_multiplicity(D, H, "resultant")
    if isinstance(D, TruncSeries):
        return intersection_with_series(D, H)
    cur = D
    for _ in range(6):
        try:
            return intersection_with_series(cur.equation, H)
        except PrecisionTooLow:
            cur = discriminant_at_precision(cur.f, cur.g, 2 * cur.precision)
    raise PrecisionTooLow("i0(D, H) not certified after raising precision")


@dataclass
class NuResult:
    nu: int
    N: int
    t_ref: object
    i_t: int
    i_ref: int
    history: list = field(default_factory=list)

    def to_json(self):
        return {"nu": self.nu, "N": self.N, "t_ref": describe_scalar(self.t_ref),
                "i0_t": self.i_t, "i0_ref": self.i_ref, "difference": self.i_t - self.i_ref,
                "history": self.history}


def nu_bound(D, w):
    """Upper bound for every nu_i of an edge root: k nu_i <= v-degree of in_w(D)."""
    k, l = check_weight(w)
    ini = weighted_initial_form(D, (k, l))
    return max(j for (_, j) in ini.support()) // k


def nu_via_intersection(D, w, t, N=None, max_N=64):
    """nu = (i0(D, H_t) - i0(D, H_tref)) / (k l) with N > nu k l checked afterwards."""
    k, l = check_weight(w)
    if simplify(t) == 0:
        raise AlgebraError("t must be nonzero")
    if isinstance(D, DirectImage) and D.is_unit():
        return NuResult(0, N or 1, fmpq(1), 0, 0)
    fe = factor_edge(weighted_initial_form(D, (k, l)), (k, l))
    t_ref = _reference_t([r.t for r in fe.roots] + [t])
    safe = nu_bound(D, (k, l)) * k * l + 1
    # a computed direct image carries exact branch parametrizations; a rational t
    # keeps the conjugate branches' contributions equal
    image_route = isinstance(D, DirectImage) and (
        isinstance(simplify(t), fmpq) or all(r.conjugacy == 1 for r in D.ledger))
    n = N or safe
    history = []
    while True:
        if n > max_N:
            raise CapacityError("N = %d exceeds the cap %d" % (n, max_N))
        if image_route:
            a = _i0_image_pencil(D, k, l, t, n)
            b = _i0_image_pencil(D, k, l, t_ref, n)
        else:
            a = _i0_D(D, target_pencil((k, l), t, n))
            b = _i0_D(D, target_pencil((k, l), t_ref, n))
        if a.infinite or b.infinite:
            raise InconsistencyError("test curve shares a component with D")
        diff = int(a) - int(b)
        history.append({"N": n, "difference": diff})
        if n >= safe or (diff % (k * l) == 0 and n > diff):
            if diff % (k * l):
                raise InconsistencyError("i0 difference %d is not divisible by kl = %d" % (diff, k * l))
            nu = diff // (k * l)
            if n > nu * k * l:
                return NuResult(nu, n, t_ref, int(a), int(b), history)
        n = safe if n < safe else n + 1


def nu_via_milnor(f, g, w, t, N=None, t_ref=None, max_N=12, atypical=None, max_degree=32):
    """nu = (mu(h_t) - mu(h_tref)) / (k l), N chosen by stabilization.

    Raises CapacityError when the next pencil member would exceed ``max_degree``.
    """
    k, l = check_weight(w)
    if simplify(t) == 0:
        raise AlgebraError("t must be nonzero")
    if t_ref is None:
        if atypical is None:
            atypical = pencil_atypical_set(f, g, (k, l))
        t_ref = _reference_t(list(atypical) + [t])
    history = []

    def nu_at(n):
        deg = max(k * g.total_degree() * n, l * f.total_degree() * (n + 1))
        if deg > max_degree:
            raise CapacityError("pencil member of degree %d exceeds max_degree=%d" % (deg, max_degree))
        mt = milnor_number(source_pencil(f, g, (k, l), t, n))
        mr = milnor_number(source_pencil(f, g, (k, l), t_ref, n))
        diff = mt - mr
        nu = diff // (k * l) if diff % (k * l) == 0 else None
        history.append({"N": n, "mu_t": mt, "mu_ref": mr, "nu": nu})
        return nu

    if N is not None:
        nu = nu_at(N)
        if nu is None:
            raise InconsistencyError("mu difference %d is not divisible by kl = %d"
                                     % (history[-1]["mu_t"] - history[-1]["mu_ref"], k * l))
        return NuResult(nu, N, t_ref, history[-1]["mu_t"], history[-1]["mu_ref"], history)
    n = 1
    prev = nu_at(n)
    while n < max_N:
        n += 1
        cur = nu_at(n)
        if cur is not None and cur == prev and n - 1 > cur * k * l:
            h = history[-1]
            return NuResult(cur, n, t_ref, h["mu_t"], h["mu_ref"], history)
        prev = cur
    raise CapacityError("nu did not stabilize up to N = %d" % max_N)


# -- atypical values --------------------------------------------------------

_CTX_XYT = fmpq_mpoly_ctx.get(("x", "y", "t"), "lex")


def _mpoly3(p):
    """A rational BiPoly as an mpoly in (x, y, t)."""
    return _CTX_XYT.from_dict({(i, j, 0): c for (i, j), c in p.coeffs().items()})


def _pencil_resultant(f, g, w):
    """Shear c and the resultant in (x, t) of the partials of the symbolic pencil."""
    k, l = check_weight(w)
    x, y, t = _CTX_XYT.gens()
    F, G = _mpoly3(f), _mpoly3(g)
    P = G ** k - t * F ** l
    for c in range(0, 64):
        Pc = P.compose(x + c * y, y, t) if c else P
        Px, Py = Pc.derivative(0), Pc.derivative(1)
        if Px.is_zero() or Py.is_zero():
            continue
        lx, ly = _lc_in_y(Px), _lc_in_y(Py)
        if lx is None or ly is None:
            continue
        g0 = _at_x0(Px).gcd(_at_x0(Py))
        if not _only_y_and_t(g0):
            continue
        R = Px.resultant(Py, "y")
        if R.is_zero():
            raise NonIsolatedError("generic member of the pencil has a non-isolated singularity")
        return c, R, lx, ly
    raise AlgebraError("no admissible shear for the pencil")  # pragma: no cover


def _lc_in_y(p):
    """Leading coefficient in y if it is free of x (a polynomial in t), else None."""
    d = p.to_dict()
    top = max(j for (_, j, _) in d)
    lc = {(i, tt): v for (i, j, tt), v in d.items() if j == top}
    if any(i for (i, _) in lc) or top != max(i + j for (i, j, _) in d):
        return None
    return UniPoly([fmpq(lc.get((0, e), 0)) for e in range(max(tt for (_, tt) in lc) + 1)])


def _at_x0(p):
    d = {(0, j, tt): v for (i, j, tt), v in p.to_dict().items() if i == 0}
    return _CTX_XYT.from_dict(d)


def _only_y_and_t(p):
    """True if p = y^a * c(t)."""
    _, facs = p.factor()
    for q, _ in facs:
        d = q.to_dict()
        ys = {j for (_, j, _) in d}
        ts = {tt for (_, _, tt) in d}
        if ys == {1} and ts == {0} and len(d) == 1:
            continue
        if ys == {0}:
            continue
        return False
    return True


def _univariate_t(poly_t_dict):
    n = max(poly_t_dict) + 1
    return UniPoly([fmpq(poly_t_dict.get(e, 0)) for e in range(n)])


def pencil_candidates(f, g, w):
    """Irreducible polynomials in t whose roots may be atypical (method B, step 1)."""
    c, R, lx, ly = _pencil_resultant(f, g, w)
    d = R.to_dict()
    n0 = min(i for (i, _, _) in d)
    cn = {tt: v for (i, _, tt), v in d.items() if i == n0}
    polys = [_univariate_t(cn), lx, ly]
    cands = {}
    for p in polys:
        if p.degree <= 0:
            continue
        for q, _ in uni_factor(p, QQ):
            if q.degree == 1 and q.coeffs[0] == 0:
                continue          # t = 0 is excluded
            cands[tuple(str(c) for c in q.coeffs)] = q
    return n0, list(cands.values())


def _root_of(q):
    if q.degree == 1:
        return simplify(-q.coeffs[0] / q.coeffs[1])
    K = QQ.adjoin(list(q.monic().coeffs))
    return K.generator()


def _mu_or_inf(h):
    try:
        return milnor_number(h)
    except NonIsolatedError:
        return None


def pencil_atypical_set(f, g, w, with_minpolys=False):
    """Method B: values of t where mu of g^k - t f^l differs from the generic value."""
    _, cands = pencil_candidates(f, g, w)
    roots = [(q, _root_of(q)) for q in cands]
    t_gen = _reference_t([r for _, r in roots if isinstance(r, fmpq)])
    mu_gen = _mu_or_inf(source_pencil(f, g, w, t_gen))
    out = []
    for q, r in roots:
        if _mu_or_inf(source_pencil(f, g, w, r)) != mu_gen:
            out.append((q, r))
    if with_minpolys:
        return out, mu_gen, t_gen
    return [r for _, r in out]


@dataclass
class AtypicalResult:
    values: list            # [(t, nu)]
    method_a: list
    method_b: list
    generic_mu: object

    def to_json(self):
        return {"values": [{"t": describe_scalar(t), "nu": nu} for t, nu in self.values],
                "method_a_minpolys": [[rational_str(c) for c in m.coeffs()] for m in self.method_a],
                "method_b_minpolys": [[rational_str(c) for c in m.coeffs()] for m in self.method_b],
                "generic_mu": self.generic_mu}


def _minpoly_key(a):
    return tuple(rational_str(c) for c in minimal_polynomial(a).coeffs())


def atypical_values(f, g, w, disc=None):
    """Atypical values of the pencil g^k - t f^l by two independent methods."""
    k, l = check_weight(w)
    D = discriminant(f, g) if disc is None else disc
    a_vals = []
    if not D.is_unit():
        fe = edge_roots(D, (k, l))
        a_vals = [(r.t, r.nu) for r in fe.roots]
    b_list, mu_gen, _ = pencil_atypical_set(f, g, (k, l), with_minpolys=True)
    ka = sorted(_minpoly_key(t) for t, _ in a_vals)
    kb = sorted(_minpoly_key(r) for _, r in b_list)
    ma = [minimal_polynomial(t) for t, _ in a_vals]
    mb = [minimal_polynomial(r) for _, r in b_list]
    if ka != kb:
        raise InconsistencyError("atypical values disagree: edge roots %s, pencil jumps %s" % (ka, kb))
    return AtypicalResult(a_vals, ma, mb, mu_gen)


# -- equisingularity checks -------------------------------------------------

def generic_fiber_equisingularity(f, g, u1, u2, w, ts=None):
    """Generic members of the pencils for (f,g) and its perturbation are equisingular."""
    k, l = check_weight(w)
    ft, gt = perturb(f, g, u1, u2)
    if ts is None:
        avoid = atypical_values(f, g, w).values + atypical_values(ft, gt, w).values
        avoid = [t for t, _ in avoid]
        ts = []
        for n in itertools.count(1):
            if all(simplify(a) != n for a in avoid):
                ts.append(fmpq(n))
            if len(ts) == 2:
                break
    results = []
    ok = True
    for t in ts:
        a = equisingularity_type([("h", source_pencil(f, g, w, t))])
        b = equisingularity_type([("h", source_pencil(ft, gt, w, t))])
        v = equisingular(a, b)
        ok = ok and v.equisingular
        results.append({"t": rational_str(t), "equisingular": v.equisingular,
                        "semigroups": [list(br.semigroup) for br in a.branches],
                        "semigroups_perturbed": [list(br.semigroup) for br in b.branches]})
    return VerificationReport("generic_fiber_equisingularity",
                              _inputs(f=f, g=g, u1=u1, u2=u2), {"fibers": results},
                              HOLDS if ok else FAILS, {"w": [k, l]},
                              None if ok else {"fibers": results})


def key_lemma_curves(f, g, u1, u2, N):
    ft, gt = perturb(f, g, u1, u2)
    return (g - f) ** N - f ** (N + 1), (gt - ft) ** N - ft ** (N + 1)


def key_lemma_check(f, g, u1, u2, N=None, max_N=12, pencil=None):
    """(g-f)^N - f^(N+1) against its perturbation, stabilized over N and N+1."""
    def verdict_at(n):
        c1, c2 = key_lemma_curves(f, g, u1, u2, n)
        a = equisingularity_type([("h", c1)])
        b = equisingularity_type([("h", c2)])
        v = equisingular(a, b)
        return v.equisingular, a, b

    runs = []
    n = N or 2
    prev = None
    while n <= max_N:
        ok, a, b = verdict_at(n)
        runs.append({"N": n, "equisingular": ok,
                     "semigroups": [list(br.semigroup) for br in a.branches],
                     "semigroups_perturbed": [list(br.semigroup) for br in b.branches]})
        if prev is not None and prev == ok:
            break
        prev = ok
        n += 1
    else:
        raise AlgebraError("verdict did not stabilize up to N = %d" % max_N)
    arts = {"runs": runs}
    if pencil is not None:
        w, t = pencil
        n2 = runs[-1]["N"]
        h1 = source_pencil(f, g, w, t, n2)
        ft, gt = perturb(f, g, u1, u2)
        h2 = source_pencil(ft, gt, w, t, n2)
        pv = equisingular(equisingularity_type([("h", h1)]), equisingularity_type([("h", h2)]))
        arts["pencil_form"] = {"w": list(w), "t": rational_str(t), "N": n2,
                               "equisingular": pv.equisingular}
    ok = runs[-1]["equisingular"] and (pencil is None or arts["pencil_form"]["equisingular"])
    return VerificationReport("key_lemma", _inputs(f=f, g=g, u1=u1, u2=u2), arts,
                              HOLDS if ok else FAILS, {"N": [r["N"] for r in runs]},
                              None if ok else {"runs": runs})


# -- rescaling ----------------------------------------------------------------

def rescaling_check(f, g, u1, u2):
    """Initial polynomials of D for (f,g) and (u1 f, u2 g) agree up to rescaling."""
    a, b = u1.constant_term(), u2.constant_term()
    if a == 0 or b == 0:
        raise AlgebraError("u1 and u2 must be units")
    D = discriminant(f, g)
    D1 = discriminant(u1 * f, u2 * g)
    if D.is_unit() or D1.is_unit():
        ok = D.is_unit() and D1.is_unit()
        return VerificationReport("rescaling", _inputs(f=f, g=g, u1=u1, u2=u2),
                                  {"D": D.to_str(), "D1": D1.to_str()}, HOLDS if ok else FAILS)
    i0, i1 = _initial(D), _initial(D1)
    # D is only defined up to a nonzero constant
    rw = rescale_equal(i1, i0, up_to_constant=True)
    # image of (a f, b g) is the image of (f, g) scaled by (a, b): D1(a u, b v) ~ D(u, v)
    witness = equal_up_to_constant(i0, i1.rescale(a, b)) is not None
    literal = equal_up_to_constant(i1, i0.rescale(a, b)) is not None
    arts = {"initial": _uv(i0), "initial_rescaled_map": _uv(i1),
            "rescale_equal": rw.to_json(),
            "witness": [rational_str(a) if isinstance(a, fmpq) else str(a),
                        rational_str(b) if isinstance(b, fmpq) else str(b)],
            "D1(au,bv)~D(u,v)": witness,
            "D(au,bv)~D1(u,v)": literal}
    ok = rw.solvable and witness
    return VerificationReport("rescaling", _inputs(f=f, g=g, u1=u1, u2=u2), arts,
                              HOLDS if ok else FAILS, {},
                              None if ok else {"initial": _uv(i0), "initial_rescaled_map": _uv(i1)})


# -- unitangent curves ------------------------------------------------------

def tangent_cone_line(h):
    """The linear form L with in(h) = c L^d, or None if h is not unitangent."""
    o = germ_order(h)
    form = h.filter_terms(lambda i, j: i + j == o)
    cs = form.coeffs()
    if o < 2:
        return None
    uni = UniPoly([cs.get((o - j, j), 0) for j in range(o + 1)])   # form(1, s)
    if uni.degree < o:
        # x divides; unitangent iff form = c x^o
        if uni.degree == 0:
            return BiPoly.x()
        return None
    fac = uni_factor(uni, QQ)
    if len(fac) != 1 or fac.factors[0][0].degree != 1:
        return None
    r = -fac.factors[0][0].coeffs[0]
    return BiPoly.y() - BiPoly.x() * r


def tc3_check(h, l1, l2):
    """Compute d along the tangent of h and compare the two discriminants."""
    L = tangent_cone_line(h)
    if L is None:
        raise AlgebraError("curve is not unitangent singular")
    m = germ_order(h)
    for ell in (l1, l2):
        if ell.order() != 1:
            raise AlgebraError("%s is not smooth" % ell)
        if int(intersection_multiplicity(ell, h, "resultant")) != m:
            raise AlgebraError("%s is not transverse to the curve" % ell)
    # tangent line L = 0 parametrized by s -> (beta s, -alpha s)
    al, be = L.coefficient(1, 0), L.coefficient(0, 1)
    px, py = be, -al
    c1 = l1.coefficient(1, 0) * px + l1.coefficient(0, 1) * py
    c2 = l2.coefficient(1, 0) * px + l2.coefficient(0, 1) * py
    if c1 == 0 or c2 == 0:
        raise AlgebraError("d is undefined")
    d = simplify(c2 / c1)
    D1 = discriminant(l1 * d, h)
    D2 = discriminant(l2, h)
    i1, i2 = _initial(D1), _initial(D2)
    strict = i1 == i2
    const = equal_up_to_constant(i1, i2)
    verdict = HOLDS if strict else (UP_TO_CONSTANT if const is not None else FAILS)
    arts = {"d": rational_str(d), "tangent": _s(L), "initial_d_l1": _uv(i1), "initial_l2": _uv(i2)}
    return VerificationReport("tc3", _inputs(h=h, l1=l1, l2=l2), arts, verdict, {"d": rational_str(d)},
                              None if verdict != FAILS else arts)


# -- elimination oracle -----------------------------------------------------

_CTX_XYUV = fmpq_mpoly_ctx.get(("x", "y", "u", "v"), "lex")


def _mp4(p):
    return _CTX_XYUV.from_dict({(i, j, 0, 0): c for (i, j), c in p.coeffs().items()})


@dataclass
class OracleResult:
    poly: object                 # BiPoly in (u, v): product of local factors
    factors: list                # [(BiPoly, exponent)]
    flagged: list                # factors or ledger rows that could not be matched
    extraneous: list             # factors through 0 that carry no critical branch
    shear: int = 0

    def to_json(self):
        return {"equation": _uv(self.poly),
                "factors": [[_uv(p), e] for p, e in self.factors],
                "flagged": [str(p) for p in self.flagged],
                "extraneous": [_uv(p) for p in self.extraneous],
                "shear": self.shear}


def _eliminate(f, g):
    """Res_x(Res_y(f-u, J), Res_y(g-v, J)) after the first shear making it nonzero."""
    x, y, u, v = _CTX_XYUV.gens()
    for c in range(0, 16):
        fc = f.compose(BiPoly.x() + BiPoly.y() * c, BiPoly.y()) if c else f
        gc = g.compose(BiPoly.x() + BiPoly.y() * c, BiPoly.y()) if c else g
        J = jacobian(fc, gc)
        if J.degree_in("y") == 0:
            continue
        R1 = (_mp4(fc) - u).resultant(_mp4(J), "y")
        R2 = (_mp4(gc) - v).resultant(_mp4(J), "y")
        R = R1.resultant(R2, "x")
        if not R.is_zero():
            return R, c
    raise AlgebraError("elimination degenerated for every shear tried")  # pragma: no cover


def oracle_discriminant(f, g, degree_cap=6, disc=None):
    """Elimination of (f - u, g - v, Jac), localized at 0 and matched to the ledger."""
    if max(f.total_degree(), g.total_degree()) > degree_cap:
        raise AlgebraError("oracle degree cap %d exceeded" % degree_cap)
    J = jacobian(f, g)
    if J.coefficient(0, 0) != 0:
        return OracleResult(BiPoly.const(1), [], [], [])
    R, c = _eliminate(f, g)
    _, facs = R.factor()
    disc = discriminant(f, g) if disc is None else disc
    bound = max(f.total_degree(), g.total_degree()) * J.total_degree()
    used = set()
    kept, flagged, extra = [], [], []
    for q, _ in facs:
        P = BiPoly.from_dict({(a, b): co for (_, _, a, b), co in q.to_dict().items()})
        if P.coefficient(0, 0) != 0:
            continue
        rows = [k for k, r in enumerate(disc.ledger) if _row_on(P, r, f, g, bound)]
        if not rows:
            extra.append(P)
            continue
        used.update(rows)
        e = _exponent(P, [disc.ledger[k] for k in rows])
        if e is None:
            flagged.append(P)
        else:
            kept.append((P, e))
    flagged.extend("ledger row %d" % k for k in range(len(disc.ledger)) if k not in used)
    acc = BiPoly.const(1)
    for P, e in kept:
        acc = acc * P ** e
    return OracleResult(acc, kept, flagged, extra, c)


def _row_on(P, r, f, g, bound):
    """The image of the ledger row's branch lies on P = 0."""
    if r.kind == "u-axis":
        return all(i >= 1 for (i, _) in P.support())
    if r.kind == "v-axis":
        return all(j >= 1 for (_, j) in P.support())
    # P(f, g) restricted to a branch of J vanishes to order at most deg(P) * bound
    n = int(r.i_f) * (P.total_degree() * bound + 2) + 2
    U, V = image_param(f, g, r.branch, n)
    from .series import evaluate_bipoly
    return evaluate_bipoly(P.lift(U.K), U, V, n).valuation() is None


def _exponent(P, rows):
    """Exponent of P in D from i0 with a coordinate axis (projection formula)."""
    a = [i for (i, j) in P.support() if j == 0]
    b = [j for (i, j) in P.support() if i == 0]
    if b:
        total = sum(int(r.i_f) * r.weight for r in rows if not r.i_f.infinite)
        ref = min(b)
    else:
        total = sum(int(r.i_g) * r.weight for r in rows if not r.i_g.infinite)
        ref = min(a)
    if total % ref:
        return None
    return total // ref


def oracle_agrees(disc, oracle):
    """Pipeline D and the oracle agree up to a unit on diagram and initial form."""
    if disc.is_unit():
        return not oracle.factors and not oracle.flagged
    if oracle.flagged:
        return False
    d1 = newton_diagram(disc)
    d2 = newton_diagram(oracle.poly)
    if d1 != d2:
        return False
    return equal_up_to_constant(initial_newton_polynomial(disc),
                                initial_newton_polynomial(oracle.poly)) is not None
