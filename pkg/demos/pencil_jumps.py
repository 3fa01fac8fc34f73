"""The pencil y(y - x) - t x^2 for the map (x, y(y - x)): where the discriminant's edge
has a root, the Milnor number of the pulled-back test curve jumps, and both
routes to the jump exponent agree."""

from flint import fmpq

from plane_germs import parse_germ
from plane_germs.discriminant import discriminant
from plane_germs.invariants import milnor_number
from plane_germs.newton import factor_edge, weighted_initial_form
from plane_germs.theorems import atypical_values, nu_via_intersection, nu_via_milnor, source_pencil

f, g = parse_germ("x"), parse_germ("y*(y - x)")
w = (1, 2)

D = discriminant(f, g)
print("D =", D.to_str())
edge = factor_edge(weighted_initial_form(D, w), w)
print("edge roots:", [(str(t), nu) for t, nu in edge.all_roots()])

A = atypical_values(f, g, w, D)
print("atypical values by both methods:", [str(t) for t, _ in A.values])

for t in (fmpq(-1, 4), fmpq(1), fmpq(7)):
    mus = [milnor_number(source_pencil(f, g, w, t, N)) for N in (1, 2, 3)]
    a = nu_via_intersection(D, w, t).nu
    b = nu_via_milnor(f, g, w, t).nu
    print("t = %-5s mu(h_t) for N = 1..3: %s   nu: %d (intersections) %d (Milnor)" % (t, mus, a, b))
