"""Walk through the map (x, y^2 - x^3): Jacobian, discriminant, diagram, Hironaka
factors, the Casas identity and a unit perturbation."""

from plane_germs import parse_germ
from plane_germs.discriminant import discriminant, hironaka_factorization, jacobian
from plane_germs.invariants import casas_check
from plane_germs.render import render_ascii
from plane_germs.theorems import verify_main_theorem

f, g = parse_germ("x"), parse_germ("y^2 - x^3")

J = jacobian(f, g)
print("Jacobian curve:", J)

D = discriminant(f, g)
print("discriminant:", D.to_str())
print("ledger:")
for row in D.ledger:
    print("  ", row.to_json())
print(render_ascii(D.diagram(), support=D.body.support()))

for h in hironaka_factorization(J, f, g, image=D):
    print("Hironaka factor:", h.to_json())

for H in ("u", "v", "u - v"):
    r = casas_check(f, g, parse_germ(H, ("u", "v")))
    print("H = %-6s mu(h) - 1 = %d, right side = %d" % (H, r.lhs, r.rhs))

r = verify_main_theorem(f, g, parse_germ("y"), parse_germ("x"))
print("perturbed discriminant:", r.artifacts["D_perturbed"])
print("initial polynomials:", r.artifacts["initial"], "|", r.artifacts["initial_perturbed"])
print("verdict:", r.verdict)
