"""Lens-elimination surgeries that turn k-plane drawings into simple ones.

Typical use::

    from kplanar import ingest_geometric, build_initial_state, algorithm1
    state = build_initial_state(ingest_geometric(drawing))
    simple, trace = algorithm1(state, k=3)
"""
from .algo import (
    algorithm1,
    algorithm2,
    f_bound,
    neighborhood_diagnostics,
    phase1,
    phase2,
    phase2_report,
    phase3,
    simplify_small_k,
)
from .errors import KPlanarError
from .gen import GenConfig, gen_random_kplane
from .geometry import GeometricDrawing, brute_force_crossings
from .ingest import check_drawing, ingest_geometric
from .io import parse_drawing, render_svg, serialize_drawing
from .lens import classify_lens, find_lens, oracle_lenses
from .model import (
    DrawingState,
    NetworkN,
    build_initial_state,
    is_simple,
    materialize_planarization,
    measures,
    validate_state,
)
from .ops import quasi_zero_reroute, reroute, swap

__version__ = "0.1.0"

__all__ = [
    "DrawingState",
    "GenConfig",
    "GeometricDrawing",
    "KPlanarError",
    "NetworkN",
    "algorithm1",
    "algorithm2",
    "brute_force_crossings",
    "build_initial_state",
    "check_drawing",
    "classify_lens",
    "f_bound",
    "find_lens",
    "gen_random_kplane",
    "ingest_geometric",
    "is_simple",
    "materialize_planarization",
    "measures",
    "neighborhood_diagnostics",
    "oracle_lenses",
    "parse_drawing",
    "phase1",
    "phase2",
    "phase2_report",
    "phase3",
    "quasi_zero_reroute",
    "render_svg",
    "reroute",
    "serialize_drawing",
    "simplify_small_k",
    "swap",
    "validate_state",
]
