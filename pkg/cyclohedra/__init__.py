"""
Centrally symmetric triangulations and the flip graph of the cyclohedron.
"""

from .constructions import (
    AbcdPair,
    bridge_path,
    build_abcd_pair,
    build_fan_minus,
    build_fan_plus,
    choose_a,
    comb_transform,
    theorem2_bound,
    theorem3_bound,
    theorem3_pair,
    upper_bound_path,
)
from .deletion import LemmaVerifier, delete_pair, delete_vertex
from .errors import CyclohedraError
from .flips import FlipMove, FlipPath, MoveKind, flip, neighbors
from .geodesic_service import GeodesicService, lower_bound, upper_bound
from .triangulation import CsTriangulation, Edge, PolygonDim, canonical_key, enumerate_cs, validate

__version__ = "0.1.0"

__all__ = [
    "AbcdPair",
    "CsTriangulation",
    "CyclohedraError",
    "Edge",
    "FlipMove",
    "FlipPath",
    "GeodesicService",
    "LemmaVerifier",
    "MoveKind",
    "PolygonDim",
    "bridge_path",
    "build_abcd_pair",
    "build_fan_minus",
    "build_fan_plus",
    "canonical_key",
    "choose_a",
    "comb_transform",
    "delete_pair",
    "delete_vertex",
    "enumerate_cs",
    "flip",
    "lower_bound",
    "neighbors",
    "theorem2_bound",
    "theorem3_bound",
    "theorem3_pair",
    "upper_bound",
    "upper_bound_path",
    "validate",
]
