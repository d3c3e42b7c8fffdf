"""JSON Schemas (draft 2020-12) for every CLI input and output document."""
from __future__ import annotations

_COMPLEX = {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2}
_COEFF = {"oneOf": [_COMPLEX, {"type": "number"}]}
_POINT = {"oneOf": [_COMPLEX, {"const": "inf"}]}

MAP_INPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Rational map",
    "oneOf": [
        {"type": "object", "required": ["num"], "additionalProperties": False,
         "properties": {"num": {"type": "array", "items": _COEFF, "minItems": 1},
                        "den": {"type": "array", "items": _COEFF, "minItems": 1}}},
        {"type": "object", "required": ["quadratic_c"], "additionalProperties": False,
         "properties": {"quadratic_c": _COEFF}},
    ],
}

FG_AB_GROUP = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Finitely generated abelian group",
    "type": "object",
    "required": ["free_rank", "torsion"],
    "properties": {
        "free_rank": {"type": "integer", "minimum": 0},
        "torsion": {"type": "array", "items": {"type": "integer", "minimum": 2}},
        "unit": {
            "type": "object",
            "required": ["torsion_coords", "free_coords"],
            "properties": {
                "torsion_coords": {"type": "array", "items": {"type": "integer"}},
                "free_coords": {"type": "array", "items": {"type": "integer"}},
            },
        },
        "unit_status": {"enum": ["zero", "generator", "torsion_generator", "other"]},
        "pretty": {"type": "string"},
    },
}

K_THEORY_RESULT = {
    "type": "object",
    "required": ["algebra", "k0", "k1"],
    "properties": {"algebra": {"enum": ["sphere", "fatou", "julia"]},
                   "k0": FG_AB_GROUP, "k1": FG_AB_GROUP},
}

_HERMAN = {
    "type": "object",
    "required": ["length"],
    "properties": {
        "length": {"type": "integer", "minimum": 1},
        "h_values": {"type": "object", "additionalProperties": {"type": "integer", "minimum": 0}},
        "phi_minus_h": {"type": "integer"},
        "orientation": {"enum": ["+", "-"]},
    },
}

_FATOU_CYCLE = {
    "type": "object",
    "required": ["length", "kind"],
    "properties": {
        "length": {"type": "integer", "minimum": 1},
        "kind": {"enum": ["attracting", "parabolic", "siegel", "herman"]},
        "confidence": {"type": "string"},
        "critical_labels": {"type": "array", "items": {"type": "string"}},
        "cycle": {"type": "object"},
    },
}

FATOU_SPEC = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Fatou spec",
    "type": "object",
    "required": ["degree"],
    "properties": {
        "degree": {"type": "integer", "minimum": 2},
        "c_julia": {"type": "integer", "minimum": 0},
        "c_fatou": {"type": "integer", "minimum": 0},
        "julia_critical_labels": {"type": "array", "items": {"type": "string"}},
        "fatou_cycles": {"type": "array", "items": _FATOU_CYCLE},
        "herman": {"type": "array", "items": _HERMAN},
        "provenance": {"enum": ["computed", "declared", "mixed"]},
        "complete": {"type": "boolean"},
        "undetermined_labels": {"type": "array", "items": {"type": "string"}},
    },
}

GRAPH_INPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Directed graph",
    "type": "object",
    "required": ["vertices"],
    "properties": {
        "vertices": {"type": "integer", "minimum": 1},
        "edges": {"type": "array", "items": {"type": "array", "items": {"type": "integer"},
                                             "minItems": 2, "maxItems": 3}},
        "infinite_emitters": {"type": "array", "items": {"type": "integer", "minimum": 0}},
    },
}

_NULLABLE_K = {"oneOf": [K_THEORY_RESULT, {"type": "null"}]}

K_THEORY_OUTPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "K-theory of the sphere, Fatou and Julia algebras",
    "type": "object",
    "required": ["sphere", "fatou", "julia"],
    "properties": {"sphere": _NULLABLE_K, "fatou": _NULLABLE_K, "julia": _NULLABLE_K,
                   "herman_matrix": {"type": ["object", "null"]},
                   "notes": {"type": "array", "items": {"type": "string"}}},
}

ANALYZE_OUTPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Analyze report",
    "type": "object",
    "required": ["map", "degree", "critical_points", "orbits", "fatou_spec", "k_theory", "complete"],
    "properties": {
        "map": {"type": "object", "required": ["num", "den"]},
        "degree": {"type": "integer", "minimum": 2},
        "critical_points": {"type": "array", "items": {
            "type": "object", "required": ["label", "location", "index"],
            "properties": {"label": {"type": "string"}, "location": _POINT,
                           "index": {"type": "integer", "minimum": 2}}}},
        "orbits": {"type": "object", "additionalProperties": {
            "type": "object", "required": ["outcome"],
            "properties": {"outcome": {"enum": ["escaped", "converged", "preperiodic", "undetermined"]}}}},
        "fatou_spec": FATOU_SPEC,
        "k_theory": K_THEORY_OUTPUT,
        "complete": {"type": "boolean"},
    },
}

_CERTIFICATE = {
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": ["EscapeCertified", "AttractingCycle", "ParabolicCycle",
                                     "SiegelMultiplier", "MisiurewiczExact"]}},
}

QUAD_VERDICT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Quadratic verdict",
    "type": "object",
    "required": ["c", "case", "certificate", "k0", "k1", "algebra"],
    "properties": {
        "c": _COMPLEX,
        "case": {"enum": ["Case0", "Case1", "Case2", "Case3", "Unresolved"]},
        "certificate": {"oneOf": [_CERTIFICATE, {"type": "null"}]},
        "k0": {"oneOf": [FG_AB_GROUP, {"type": "null"}]},
        "k1": {"oneOf": [FG_AB_GROUP, {"type": "null"}]},
        "algebra": {"enum": ["O2", "Q2", "Q2inf", "Oinf", "Unknown"]},
    },
}

GRAPH_OUTPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Graph algebra K-theory",
    "type": "object",
    "required": ["k0", "k1", "matrix"],
    "properties": {"k0": FG_AB_GROUP, "k1": FG_AB_GROUP,
                   "matrix": {"type": "array", "items": {"type": "array", "items": {"type": "integer"}}}},
}

SHIFT_OUTPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Invariants of I - Phi_k",
    "type": "object",
    "required": ["k", "det", "kernel_rank", "cokernel"],
    "properties": {"k": {"type": "integer", "minimum": 1}, "det": {"type": "integer"},
                   "kernel_rank": {"type": "integer", "minimum": 0}, "cokernel": FG_AB_GROUP},
}

ERROR_OUTPUT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "title": "Error",
    "type": "object",
    "required": ["error", "message"],
    "properties": {"error": {"enum": ["parse", "validation", "budget", "nonconvergence", "usage"]},
                   "message": {"type": "string"}},
}

SCHEMAS = {
    "map": MAP_INPUT,
    "fatou_spec": FATOU_SPEC,
    "graph": GRAPH_INPUT,
    "group": FG_AB_GROUP,
    "ktheory": K_THEORY_OUTPUT,
    "analyze": ANALYZE_OUTPUT,
    "quad": QUAD_VERDICT,
    "graph_ktheory": GRAPH_OUTPUT,
    "shift": SHIFT_OUTPUT,
    "error": ERROR_OUTPUT,
}
