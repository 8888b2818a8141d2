"""JSON Schemas for the command-line outputs, keyed by subcommand.

``flow`` emits one ``flow_step`` object per iterate and a closing
``flow_summary``; ``fiber-sample`` prints a summary and writes one
``fiber_record`` per line of its samples file.
"""

_REAL = {"type": "number"}
_REALS = {"type": "array", "items": _REAL}
_FACE = {
    "type": "object",
    "required": ["kind", "qubit"],
    "properties": {"kind": {"enum": ["polygonal", "degenerate"]}, "qubit": {"type": "integer", "minimum": 1}},
    "additionalProperties": False,
}


def _obj(props: dict, optional: tuple = ()) -> dict:
    return {
        "type": "object",
        "required": [k for k in props if k not in optional],
        "properties": props,
        "additionalProperties": False,
    }


SCHEMAS = {
    "spectra": _obj({"lambdas": _REALS, "min_eigenvalues": _REALS}),
    "classify": _obj(
        {
            "class": {"enum": ["GHZ", "W", "B1", "B2", "B3", "SEP"]},
            "abs_det": {"type": "number", "minimum": 0},
            "local_ranks": {"type": "array", "items": {"enum": [1, 2]}, "minItems": 3, "maxItems": 3},
        }
    ),
    "polytope-check": _obj(
        {
            "inside": {"type": "boolean"},
            "margins": _REALS,
            "active_faces": {"type": "array", "items": _FACE},
            "distance_to_boundary": _REAL,
            "in_w_polytope": {"type": "boolean"},
        },
        optional=("in_w_polytope",),
    ),
    "vertices": _obj(
        {
            "vertices": {
                "type": "object",
                "additionalProperties": {"type": "array", "items": _REAL, "minItems": 3, "maxItems": 3},
            },
            "face_counts": _obj(
                {"vertices": {"type": "integer"}, "edges": {"type": "integer"}, "facets": {"type": "integer"}}
            ),
        }
    ),
    "fiber-sample": _obj(
        {
            "target": _REALS,
            "accepted": {"type": "integer", "minimum": 0},
            "restarts": {"type": "integer", "minimum": 0},
            "acceptance_rate": {"type": "number", "minimum": 0, "maximum": 1},
            "partial": {"type": "boolean"},
            "samples_file": {"type": "string"},
            "cloud_file": {"type": "string"},
        }
    ),
    "fiber_record": _obj(
        {
            "target": _REALS,
            "seed": {"type": "integer"},
            "trial": {"type": "integer", "minimum": 0},
            "residual": {"type": "number", "minimum": 0},
            "num_qubits": {"type": "integer", "minimum": 1},
            "amplitudes": {
                "type": "array",
                "items": {"type": "array", "items": _REAL, "minItems": 2, "maxItems": 2},
            },
        }
    ),
    "fiber-dim": _obj(
        {
            "num_samples": {"type": "integer"},
            "centered_singular_values": {"type": "array", "items": _REAL, "minItems": 2, "maxItems": 2},
            "hull_area": {"type": "number", "minimum": 0},
            "max_pairwise_distance": {"type": "number", "minimum": 0},
            "estimated_dimension": {"enum": [0, 1, 2]},
            "notes": {"type": "array", "items": {"type": "string"}},
            "target": {"type": ["array", "null"], "items": _REAL},
        }
    ),
    "lu-check": _obj(
        {
            "overlap": {"type": "number", "minimum": 0, "maximum": 1},
            "threshold": _REAL,
            "lu_equivalent": {"type": "boolean"},
        }
    ),
    "orbit-dims": _obj(
        {
            "k_dim_real": {"type": "integer"},
            "g_dim_real": {"type": "integer"},
            "b_dim_complex": {"type": "integer"},
            "spherical": {"type": "boolean"},
            "singular_values": _obj({"k": _REALS, "g": _REALS, "b": _REALS}),
            "num_qubits": {"type": "integer"},
        }
    ),
    "flow_step": _obj(
        {"step": {"type": "integer", "minimum": 0}, "lambdas": _REALS, "moment_norm_square": _REAL}
    ),
    "flow_summary": _obj(
        {"converged": {"type": "boolean"}, "limit_spectra": _REALS, "diagnostic": {"type": "string"}}
    ),
    "haar-density": _obj(
        {
            "edges": _REALS,
            "density": _REALS,
            "counts": {"type": "array", "items": {"type": "integer", "minimum": 0}},
        }
    ),
    "error": _obj({"error": {"type": "string"}, "detail": {"type": "string"}}),
}
SCHEMAS["spherical"] = SCHEMAS["orbit-dims"]
