"""bandkit: banded-unlink diagram calculus over Kirby diagrams.

Diagrams are planar combinatorial maps whose 4-valent vertices are either
classical crossings or marked vertices standing for surface bands; circuits
carry roles (dotted 1-handle circles, framed 2-handle circles, or surface
link material).  The package computes band-move invariants, applies the band
move catalog as local rewrites, verifies move scripts, and searches for move
sequences between diagrams.
"""

from .canon import canonical_form, dedup_key, isomorphic
from .diagram import (Diagram, Role, ValidationReport, Vertex, handle_role,
                      make_diagram, trace_circuits, validate_structure)
from .errors import (BandkitError, DimensionMismatch, IllegalSite,
                     KirbyMismatch, MalformedMap, MalformedTangle,
                     NonCoherentChord, NotOverK0, ParseError, RoleViolation,
                     SameCircuit, ScriptError, SemanticError, Unsupported,
                     UnknownFixture)

__all__ = [
    "Diagram", "Role", "Vertex", "ValidationReport",
    "make_diagram", "handle_role", "trace_circuits", "validate_structure",
    "canonical_form", "isomorphic", "dedup_key",
    "BandkitError", "MalformedMap", "ParseError", "SemanticError",
    "SameCircuit", "DimensionMismatch", "IllegalSite", "RoleViolation",
    "ScriptError", "KirbyMismatch", "Unsupported", "NotOverK0",
    "NonCoherentChord", "MalformedTangle", "UnknownFixture",
]

__version__ = "0.1.0"
