"""Command line front end: one subcommand per operation.

Exit codes: 0 success, 1 internal inconsistency, 2 input error, 3 capacity error.
"""

from __future__ import annotations

import argparse
import contextlib
import json
import sys

from . import discriminant as disc_mod
from . import invariants as inv
from . import newton, puiseux, theorems
from .bipoly import TruncSeries
from .numbers import (AlgebraError, CapacityError, describe_scalar,
                      parse_rational, rational_str, tower_degree_cap)
from .parser import ParseError, parse_any, parse_germ
from .render import render_diagram

INPUT_ERRORS = (ParseError, ValueError, inv.NonIsolatedError, newton.PrecisionError)
INTERNAL_ERRORS = (disc_mod.ValidationError, inv.MethodDisagreement, theorems.InconsistencyError)


class Report:
    def __init__(self, command, inputs):
        self.command = command
        self.inputs = inputs
        self.result = None
        self.text = []
        self.warnings = []
        self.svg = None

    def line(self, s=""):
        self.text.append(s)

    def to_json(self):
        return {"command": self.command, "inputs": self.inputs,
                "result": self.result, "warnings": self.warnings}


def _weight(text):
    try:
        k, l = (int(s) for s in text.split(","))
    except ValueError:
        raise ValueError("weight must be K,L with positive integers, got %r" % text)
    return newton.check_weight((k, l))


def _xy(text):
    return parse_germ(text, ("x", "y"))


def _uv(text):
    return parse_germ(text, ("u", "v"))


def _with_precision(p, precision):
    return TruncSeries(p, precision) if precision else p


# -- subcommands --------------------------------------------------------------

def cmd_diagram(a, r):
    p, names = parse_any(a.expr)
    d = newton.newton_diagram(_with_precision(p, a.precision))
    r.result = d.to_json()
    r.line(str(d))
    r.line(render_diagram(d, "ascii", p.support()).decode().rstrip())
    r.svg = (d, p.support())


def cmd_initial(a, r):
    p, names = parse_any(a.expr)
    ini = newton.initial_newton_polynomial(_with_precision(p, a.precision))
    r.result = {"initial": ini.to_str(names)}
    r.line(ini.to_str(names))


def cmd_inw(a, r):
    p, names = parse_any(a.expr)
    w = _weight(a.w)
    q = newton.weighted_initial_form(_with_precision(p, a.precision), w)
    r.result = {"weight": list(w), "initial_form": q.to_str(names)}
    r.line(q.to_str(names))


def cmd_factor_edge(a, r):
    p, names = parse_any(a.expr)
    w = _weight(a.w)
    fe = newton.factor_edge(p, w)
    r.result = fe.to_json()
    u, v = names
    r.line("C = %s, nu0 = %d, nu_last = %d" % (_sc(fe.C), fe.nu0, fe.nu_last))
    for root in fe.roots:
        r.line("  (%s^%d - t %s^%d)^%d  t = %s" % (v, w[0], u, w[1], root.nu, _sc(root.t)))


def cmd_rescale_equal(a, r):
    p, names = parse_any(a.p)
    q = parse_germ(a.q, names)
    res = newton.rescale_equal(p, q, a.up_to_constant)
    r.result = res.to_json()
    r.line("solvable: %s" % res.solvable)
    if res.witness:
        names = ("a", "b", "c")
        r.line("witness: " + ", ".join("%s = %s" % (n, _sc(c)) for n, c in zip(names, res.witness)))
    if res.obstruction:
        r.line("obstruction: %s" % res.to_json()["obstruction"])


def cmd_puiseux(a, r):
    h = _xy(a.expr)
    bs = puiseux.puiseux_expand(h, a.terms)
    r.result = {"branches": [b.to_json() for b in bs]}
    for b in bs:
        b.extend(a.terms)
        r.line(str(b))


def cmd_semigroup(a, r):
    h = _xy(a.expr)
    out = []
    for b in puiseux.puiseux_expand(h, 4):
        cs = puiseux.characteristic_data(b)
        sg = puiseux.semigroup(cs)
        out.append({"characteristic": list(cs.beta), "semigroup": list(sg.generators),
                    "conductor": sg.conductor(), "multiplicity": b.multiplicity,
                    "conjugacy": b.conjugacy})
        r.line("%s %s conductor %d (x%d conjugates, multiplicity %d)"
               % (cs, sg, sg.conductor(), b.conjugacy, b.multiplicity))
    r.result = {"branches": out}


def cmd_intersect(a, r):
    f, g = _xy(a.f), _xy(a.g)
    n = inv.intersection_multiplicity(f, g, a.method)
    r.result = {"i0": n.to_json(), "method": a.method}
    r.line(str(n.to_json()))


def cmd_milnor(a, r):
    h = _xy(a.expr)
    mu = inv.milnor_number(h)
    r.result = {"mu": mu}
    r.line(str(mu))


def cmd_casas(a, r):
    f, g, H = _xy(a.f), _xy(a.g), _uv(a.H)
    rep = inv.casas_check(f, g, H)
    r.result = rep.to_json()
    r.line("mu(h) - 1 = %d, i0(f,g)(mu(H) - 1) + i0(D,H) = %d: %s"
           % (rep.lhs, rep.rhs, "holds" if rep.holds else "fails"))
    if not rep.holds:
        raise theorems.InconsistencyError("Casas identity fails: %d != %d" % (rep.lhs, rep.rhs))


def cmd_jacobian(a, r):
    J = disc_mod.jacobian(_xy(a.f), _xy(a.g))
    r.result = {"jacobian": J.to_str()}
    r.line(J.to_str())


def _image_out(img, r):
    r.result = img.to_json()
    r.line(img.to_str())
    if not img.is_unit():
        r.line("diagram: %s" % img.diagram())
        r.svg = (img.diagram(), img.body.support())


def cmd_direct_image(a, r):
    h, f, g = _xy(a.h), _xy(a.f), _xy(a.g)
    disc_mod.check_map(f, g)
    img = disc_mod.direct_image(h, f, g, a.precision)
    _image_out(img, r)


def cmd_discriminant(a, r):
    f, g = _xy(a.f), _xy(a.g)
    img = disc_mod.discriminant(f, g, a.trunc or a.precision)
    _image_out(img, r)


def cmd_jacobian_diagram(a, r):
    f, g = _xy(a.f), _xy(a.g)
    d = disc_mod.jacobian_newton_diagram(f, g)
    r.result = d.to_json()
    r.line(str(d))
    r.line(render_diagram(d, "ascii").decode().rstrip())
    r.svg = (d, ())


def cmd_hironaka(a, r):
    h, f, g = _xy(a.h), _xy(a.f), _xy(a.g)
    disc_mod.check_map(f, g)
    facs = disc_mod.hironaka_factorization(h, f, g)
    r.result = {"factors": [x.to_json() for x in facs]}
    for x in facs:
        q = "inf" if x.quotient is None else rational_str(x.quotient)
        r.line("quotient %s: branches %s, totals (%s, %s)"
               % (q, x.branches, x.i_f.to_json(), x.i_g.to_json()))


def _report_out(rep, r):
    r.result = rep.to_json()
    r.line("%s: %s" % (rep.claim, rep.verdict))
    for k, v in rep.artifacts.items():
        r.line("  %s: %s" % (k, json.dumps(v, default=str) if not isinstance(v, str) else v))


def cmd_verify_main(a, r):
    rep = theorems.verify_main_theorem(_xy(a.f), _xy(a.g), _xy(a.u1), _xy(a.u2), a.precision)
    _report_out(rep, r)


def cmd_nu_from_milnor(a, r):
    f, g = _xy(a.f), _xy(a.g)
    w = _weight(a.w)
    t = parse_rational(a.t)
    res = theorems.nu_via_milnor(f, g, w, t, a.N)
    r.result = res.to_json()
    r.line("nu = %d (N = %d, t_ref = %s)" % (res.nu, res.N, rational_str(res.t_ref)))


def cmd_nu_from_intersection(a, r):
    f, g = _xy(a.f), _xy(a.g)
    w = _weight(a.w)
    t = parse_rational(a.t)
    D = disc_mod.discriminant(f, g, a.precision)
    res = theorems.nu_via_intersection(D, w, t, a.N)
    r.result = res.to_json()
    r.line("nu = %d (N = %d, t_ref = %s)" % (res.nu, res.N, rational_str(res.t_ref)))


def cmd_atypical(a, r):
    f, g = _xy(a.f), _xy(a.g)
    w = _weight(a.w)
    res = theorems.atypical_values(f, g, w)
    r.result = res.to_json()
    if not res.values:
        r.line("no atypical values")
    for t, nu in res.values:
        r.line("t = %s  nu = %d" % (_sc(t), nu))


def cmd_equisingular(a, r):
    h1, h2 = _xy(a.h1), _xy(a.h2)
    A = inv.equisingularity_type([("h", h1)])
    B = inv.equisingularity_type([("h", h2)])
    v = inv.equisingular(A, B)
    r.result = {"equisingular": v.equisingular, "first": A.to_json(), "second": B.to_json(),
                "matching": v.matching, "reason": v.reason}
    r.line("equisingular: %s%s" % (v.equisingular, "" if v.equisingular else " (%s)" % v.reason))


def cmd_key_lemma(a, r):
    rep = theorems.key_lemma_check(_xy(a.f), _xy(a.g), _xy(a.u1), _xy(a.u2), a.N)
    _report_out(rep, r)


def cmd_tc3(a, r):
    rep = theorems.tc3_check(_xy(a.h), _xy(a.l1), _xy(a.l2))
    _report_out(rep, r)


def cmd_rescaling(a, r):
    rep = theorems.rescaling_check(_xy(a.f), _xy(a.g), _xy(a.u1), _xy(a.u2))
    _report_out(rep, r)


def _sc(c):
    d = describe_scalar(c)
    if "rational" in d:
        return d["rational"]
    return "root #%d of %s ~ %s" % (d["root_index"], d["minpoly"], d["approx"])


# -- argument parsing ---------------------------------------------------------

def _global_flags(suppress):
    g = argparse.ArgumentParser(add_help=False)

    def d(v):
        return argparse.SUPPRESS if suppress else v

    g.add_argument("--json", action="store_true", default=d(False), help="print a JSON report")
    g.add_argument("--svg", metavar="PATH", default=d(None), help="write the Newton diagram as SVG")
    g.add_argument("--precision", type=int, default=d(None), help="truncation order for series")
    g.add_argument("--seed", type=int, default=d(0), help="first shear tried in resultant computations")
    g.add_argument("--max-tower-degree", type=int, default=d(None), help="cap on field extension degree")
    return g


def build_parser():
    # flags are accepted before or after the subcommand
    glob = _global_flags(False)
    sub_glob = _global_flags(True)

    p = argparse.ArgumentParser(prog="plane-germs", parents=[glob],
                                description="Local invariants of plane curve germs and map germs.")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, *args, help=None):
        sp = sub.add_parser(name, parents=[sub_glob], help=help)
        for a in args:
            if isinstance(a, tuple):
                sp.add_argument(*a[0], **a[1])
            else:
                sp.add_argument(a)
        sp.set_defaults(func=fn)
        return sp

    W = (("-w",), {"required": True, "help": "weight K,L"})
    N = (("-N",), {"type": int, "default": None})
    U1 = (("--u1",), {"default": "0", "help": "perturbation of f (vanishing at 0)"})
    U2 = (("--u2",), {"default": "0", "help": "perturbation of g (vanishing at 0)"})

    add("diagram", cmd_diagram, "expr", help="Newton diagram")
    add("initial", cmd_initial, "expr", help="initial Newton polynomial")
    add("inw", cmd_inw, "expr", W, help="weighted initial form")
    add("factor-edge", cmd_factor_edge, "expr", W, help="factor a quasi-homogeneous polynomial")
    add("rescale-equal", cmd_rescale_equal, "p", "q",
        (("--up-to-constant",), {"action": "store_true", "help": "allow q = c p(ax,by)"}),
        help="q(x,y) = p(ax,by)?")
    add("puiseux", cmd_puiseux, "expr", (("--terms",), {"type": int, "default": 8}),
        help="Puiseux parametrizations")
    add("semigroup", cmd_semigroup, "expr", help="characteristic exponents and semigroups")
    add("intersect", cmd_intersect, "f", "g",
        (("--method",), {"default": "both", "choices": ["both", "resultant", "zeuthen"]}),
        help="intersection multiplicity at 0")
    add("milnor", cmd_milnor, "expr", help="Milnor number")
    add("casas-check", cmd_casas, "f", "g", "H", help="Casas identity for h = H(f,g)")
    add("jacobian", cmd_jacobian, "f", "g", help="Jacobian determinant")
    add("direct-image", cmd_direct_image, "h", "f", "g", help="image of h = 0 under (f,g)")
    add("discriminant", cmd_discriminant, "f", "g", (("--trunc",), {"type": int, "default": None}),
        help="discriminant curve of (f,g)")
    add("jacobian-diagram", cmd_jacobian_diagram, "f", "g", help="Newton diagram of the discriminant")
    add("hironaka", cmd_hironaka, "h", "f", "g", help="branches of h grouped by i0(g,.)/i0(f,.)")
    add("verify-main", cmd_verify_main, "f", "g", U1, U2,
        help="compare discriminants of (f,g) and ((1+u1)f, (1+u2)g)")
    add("nu-from-milnor", cmd_nu_from_milnor, "f", "g", W, (("-t",), {"required": True}), N,
        help="edge exponent nu from Milnor numbers of a pencil")
    add("nu-from-intersection", cmd_nu_from_intersection, "f", "g", W, (("-t",), {"required": True}), N,
        help="edge exponent nu from intersections with the discriminant")
    add("atypical", cmd_atypical, "f", "g", W, help="atypical values of g^k - t f^l")
    add("equisingular", cmd_equisingular, "h1", "h2", help="compare two curve germs")
    add("key-lemma", cmd_key_lemma, "f", "g", U1, U2, N,
        help="(g-f)^N - f^(N+1) against the perturbed map")
    add("tc3-check", cmd_tc3, "h", "l1", "l2", help="discriminants of (d l1, h) and (l2, h)")
    add("rescaling-check", cmd_rescaling, "f", "g",
        (("--u1",), {"default": "1", "help": "unit multiplying f"}),
        (("--u2",), {"default": "1", "help": "unit multiplying g"}),
        help="discriminants of (f,g) and (u1 f, u2 g)")
    return p


def _emit(r, args, out):
    if args.svg and r.svg is not None:
        d, supp = r.svg
        with open(args.svg, "wb") as fh:
            fh.write(render_diagram(d, "svg", supp))
    elif args.svg:
        r.warnings.append("no diagram to render")
    if args.json:
        out.write(json.dumps(r.to_json(), indent=2, default=str) + "\n")
    else:
        out.write("\n".join(r.text) + "\n")
        for w in r.warnings:
            out.write("warning: %s\n" % w)


def _option_strings(parser):
    found = set()
    for a in parser._actions:
        found.update(a.option_strings)
        if isinstance(a, argparse._SubParsersAction):
            for sub in a.choices.values():
                found |= _option_strings(sub)
    return found


def _protect_negatives(parser, argv):
    """Let values such as ``-1/4`` or ``-x^2+y`` through: argparse treats a token
    containing a space as positional, and the expression reader skips the space."""
    opts = _option_strings(parser)
    out = []
    for tok in argv:
        if tok.startswith("-") and tok != "--" and not any(
                tok == o or tok.startswith(o + "=") or (len(o) == 2 and tok.startswith(o)) for o in opts):
            tok = " " + tok
        out.append(tok)
    return out


def main(argv=None, out=None, err=None):
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    argv = _protect_negatives(parser, sys.argv[1:] if argv is None else list(argv))
    args = parser.parse_args(argv)
    inputs = {k: v for k, v in vars(args).items() if k not in ("func", "json", "svg")}
    r = Report(args.command, inputs)
    with contextlib.ExitStack() as stack:
        if args.max_tower_degree is not None:
            stack.enter_context(tower_degree_cap(args.max_tower_degree))
        stack.enter_context(inv.shear_seed(args.seed))
        try:
            args.func(args, r)
        except CapacityError as e:
            return _fail(r, args, out, err, "capacity error", e, 3)
        except INTERNAL_ERRORS as e:
            return _fail(r, args, out, err, "inconsistency", e, 1)
        except (AlgebraError,) + INPUT_ERRORS as e:
            return _fail(r, args, out, err, "input error", e, 2)
    _emit(r, args, out)
    return 0


def _fail(r, args, out, err, kind, e, code):
    if args.json:
        payload = r.to_json()
        payload["error"] = {"kind": kind, "message": str(e)}
        out.write(json.dumps(payload, indent=2, default=str) + "\n")
    err.write("%s: %s\n" % (kind, e))
    return code


