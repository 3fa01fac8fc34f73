"""Seeded corpus of map germs: discriminant diagrams and the unit-invariance check."""

import time

from plane_germs.bipoly import BiPoly
from plane_germs.corpus import map_corpus
from plane_germs.discriminant import discriminant
from plane_germs.theorems import verify_main_theorem

x, y = BiPoly.x(), BiPoly.y()

for k, (f, g) in enumerate(map_corpus(seed=0, count=15)):
    t0 = time.time()
    D = discriminant(f, g)
    verdicts = [verify_main_theorem(f, g, u1, u2).verdict for u1, u2 in ((y, x), (x ** 2, y ** 2))]
    incl = ", ".join(str(q) for q in D.diagram().inclinations())
    print("%2d  f = %-18s g = %-22s slopes [%s]  %s  %.1fs"
          % (k, f, g, incl, "/".join(verdicts), time.time() - t0))
