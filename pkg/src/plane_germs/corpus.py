"""Seeded generators of small germs and map germs for property and acceptance runs."""

from __future__ import annotations

import random

from .bipoly import BiPoly
from .invariants import intersection_multiplicity


def random_germ(rng, max_degree=4, height=3, max_terms=3, min_order=1):
    """A nonzero polynomial vanishing at 0 with few terms of small height."""
    while True:
        n = rng.randint(1, max_terms)
        d = {}
        for _ in range(n):
            deg = rng.randint(min_order, max_degree)
            i = rng.randint(0, deg)
            c = rng.choice([c for c in range(-height, height + 1) if c])
            d[(i, deg - i)] = c
        f = BiPoly.from_dict(d)
        if not f.is_zero():
            return f


def random_unit(rng, max_degree=2, height=3):
    """A polynomial with nonzero constant term."""
    d = {(0, 0): rng.choice([c for c in range(-height, height + 1) if c])}
    for _ in range(rng.randint(0, 2)):
        deg = rng.randint(1, max_degree)
        i = rng.randint(0, deg)
        d[(i, deg - i)] = rng.randint(-height, height)
    return BiPoly.from_dict(d)


def _valid_map(f, g):
    if f.coefficient(0, 0) != 0 or g.coefficient(0, 0) != 0:
        return False
    if intersection_multiplicity(f, g, "resultant").infinite:
        return False
    J = f.derivative("x") * g.derivative("y") - f.derivative("y") * g.derivative("x")
    # only maps with a genuine critical locus through the origin
    return not J.is_zero() and J.coefficient(0, 0) == 0


def map_corpus(seed=0, count=15, max_degree=4, height=3, max_terms=3, max_jacobian_order=None):
    """Seeded list of map germs (f, g) with an isolated zero and singular Jacobian."""
    rng = random.Random(seed)
    out = []
    seen = set()
    while len(out) < count:
        f = random_germ(rng, max_degree, height, max_terms)
        g = random_germ(rng, max_degree, height, max_terms)
        key = (str(f), str(g))
        if key in seen or not _valid_map(f, g):
            continue
        if max_jacobian_order is not None:
            J = f.derivative("x") * g.derivative("y") - f.derivative("y") * g.derivative("x")
            if J.order() > max_jacobian_order:
                continue
        seen.add(key)
        out.append((f, g))
    return out


def germ_pairs(seed=0, count=30, max_degree=4, height=3, max_terms=3):
    """Seeded pairs of germs for intersection checks (shared components allowed)."""
    rng = random.Random(seed)
    return [(random_germ(rng, max_degree, height, max_terms),
             random_germ(rng, max_degree, height, max_terms)) for _ in range(count)]
