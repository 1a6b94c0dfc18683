"""One-dimensional compaction of planar orthogonal grid drawings.

Implements the classical fixed-shape flow compaction (trad) and the
bend-for-length compaction (ff) that may reroute edges with new double
bends, plus an alternating two-axis driver, generators and a CLI.
"""

from .model import (
    Edge,
    Embedding,
    Metrics,
    OrthoDrawing,
    Point,
    ValidationReport,
    compute_embedding,
    metrics,
    star_geometry,
    validate,
)
from .normalize import NormalizedDrawing, denormalize, normalize, strip_empty_grid_lines
from .dissect import DissectedDrawing, dissection_size, insert_bend_vertices, vertical_dissect
from .flow import Flow, FlowInfeasibleError, FlowNetwork, certify_optimal, check_flow, solve_min_cost
from .compact import (
    CompactionError,
    build_ff_network,
    build_trad_network,
    compact_step,
    middle_segments,
    realize,
)
from .driver import ComparisonReport, RunTrace, alternate, compare
from .oracle import OracleResult, oracle_circulation, oracle_trad_vertical

__all__ = [
    "Edge",
    "Embedding",
    "Metrics",
    "OrthoDrawing",
    "Point",
    "ValidationReport",
    "compute_embedding",
    "metrics",
    "star_geometry",
    "validate",
    "NormalizedDrawing",
    "denormalize",
    "normalize",
    "strip_empty_grid_lines",
    "DissectedDrawing",
    "dissection_size",
    "insert_bend_vertices",
    "vertical_dissect",
    "Flow",
    "FlowInfeasibleError",
    "FlowNetwork",
    "certify_optimal",
    "check_flow",
    "solve_min_cost",
    "CompactionError",
    "build_ff_network",
    "build_trad_network",
    "compact_step",
    "middle_segments",
    "realize",
    "ComparisonReport",
    "RunTrace",
    "alternate",
    "compare",
    "OracleResult",
    "oracle_circulation",
    "oracle_trad_vertical",
]

__version__ = "0.1.0"
