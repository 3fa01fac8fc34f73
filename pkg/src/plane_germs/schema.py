"""JSON Schema (draft 2020-12) for ``--json`` payloads of the command line.

Every payload is an envelope ``{command, inputs, result, warnings[, error]}``.
``payload_schema(command)`` narrows ``result`` to the shape of that command.
"""

from __future__ import annotations

import copy

RATIONAL = {"type": "string", "pattern": r"^-?\d+(/\d+)?$"}
POINT = {"type": "array", "items": {"type": "integer", "minimum": 0}, "minItems": 2, "maxItems": 2}

DEFS = {
    "rational": RATIONAL,
    "point": POINT,
    "scalar": {
        "oneOf": [
            {"type": "object", "required": ["rational"], "properties": {"rational": RATIONAL}},
            {"type": "object",
             "required": ["minpoly", "root_index", "approx"],
             "properties": {"minpoly": {"type": "array", "items": RATIONAL, "minItems": 2},
                            "root_index": {"type": "integer", "minimum": 0},
                            "approx": {"type": "string"}}},
        ]
    },
    "diagram": {
        "type": "object",
        "required": ["vertices", "compact_edges", "axis_exponents"],
        "properties": {
            "vertices": {"type": "array", "items": {"$ref": "#/$defs/point"}},
            "compact_edges": {
                "type": "array",
                "items": {"type": "object", "required": ["from", "to", "inclination"],
                          "properties": {"from": {"$ref": "#/$defs/point"},
                                         "to": {"$ref": "#/$defs/point"},
                                         "inclination": RATIONAL}},
            },
            "axis_exponents": {"type": "object", "required": ["u", "v"],
                               "properties": {"u": {"type": "integer", "minimum": 0},
                                              "v": {"type": "integer", "minimum": 0}}},
        },
    },
    "report": {
        "type": "object",
        "required": ["claim", "inputs", "artifacts", "verdict", "parameters"],
        "properties": {
            "claim": {"type": "string"},
            "inputs": {"type": "object"},
            "artifacts": {"type": "object"},
            "verdict": {"enum": ["holds", "holds_up_to_constant", "fails"]},
            "parameters": {"type": "object"},
            "counterexample": {},
        },
        "if": {"properties": {"verdict": {"const": "fails"}}},
        "then": {"required": ["counterexample"]},
    },
}


def _keys(*names):
    return {"type": "object", "required": list(names)}


_REF = {name: {"$ref": "#/$defs/" + name} for name in ("diagram", "report")}

RESULTS = {
    "diagram": _REF["diagram"],
    "jacobian-diagram": _REF["diagram"],
    "initial": _keys("initial"),
    "inw": _keys("weight", "initial_form"),
    "factor-edge": _keys("weight", "C", "roots", "nu0", "nu_last"),
    "rescale-equal": _keys("solvable", "witness"),
    "puiseux": _keys("branches"),
    "semigroup": _keys("branches"),
    "intersect": _keys("i0", "method"),
    "milnor": {"type": "object", "required": ["mu"],
               "properties": {"mu": {"type": ["integer", "string"]}}},
    "casas-check": _keys("holds", "lhs", "rhs"),
    "jacobian": _keys("jacobian"),
    "direct-image": _keys("equation", "diagram", "ledger", "precision"),
    "discriminant": _keys("equation", "diagram", "ledger", "precision"),
    "hironaka": _keys("factors"),
    "verify-main": _REF["report"],
    "nu-from-milnor": _keys("nu", "N"),
    "nu-from-intersection": _keys("nu", "N"),
    "atypical": _keys("values"),
    "equisingular": _keys("equisingular", "first", "second"),
    "key-lemma": _REF["report"],
    "tc3-check": _REF["report"],
    "rescaling-check": _REF["report"],
}

ENVELOPE = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["command", "inputs", "result", "warnings"],
    "properties": {
        "command": {"enum": sorted(RESULTS)},
        "inputs": {"type": "object"},
        "result": {},
        "warnings": {"type": "array", "items": {"type": "string"}},
        "error": {"type": "object", "required": ["kind", "message"],
                  "properties": {"kind": {"enum": ["input error", "capacity error", "inconsistency"]},
                                 "message": {"type": "string"}}},
    },
    # a failed run carries an error and no result
    "if": {"required": ["error"]},
    "then": {"properties": {"result": {"type": "null"}}},
    "$defs": DEFS,
}


def payload_schema(command=None):
    """Envelope schema; with a command name, ``result`` is checked against its shape."""
    s = copy.deepcopy(ENVELOPE)
    if command is not None:
        s["properties"]["command"] = {"const": command}
        s["else"] = {"properties": {"result": copy.deepcopy(RESULTS[command])}}
    return s
