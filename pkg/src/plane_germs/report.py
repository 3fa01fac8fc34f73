"""JSON payload helpers shared by the command line and the theorem checks."""

from __future__ import annotations

from .numbers import describe_scalar, rational_str


def poly_json(p, names=("u", "v")):
    """Exact coefficient list [[i, j, descriptor], ...] in a stable order."""
    items = sorted(p.coeffs().items(), key=lambda kv: (kv[0][0] + kv[0][1], -kv[0][0]))
    return [[i, j, describe_scalar(c)] for (i, j), c in items]


def diagram_json(d):
    return d.to_json()


def scalar_json(a):
    return describe_scalar(a)


def rational_json(q):
    return rational_str(q)
