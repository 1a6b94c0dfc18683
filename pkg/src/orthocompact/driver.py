"""Alternate vertical and horizontal compaction and compare the two modes."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .compact import FF, HORIZONTAL, TRAD, VERTICAL, compact_step_info
from .model import Metrics, OrthoDrawing, metrics, validate

NO_IMPROVEMENT = "no_improvement"
MAX_ITERATIONS = "max_iterations"


@dataclass(frozen=True)
class IterationRecord:
    index: int
    axis: str
    mode: str
    before: Metrics
    after: Metrics
    nodes: int
    arcs: int
    dissected_edges: int
    visibility_edges: int
    total_cost: int
    solve_ms: float


@dataclass
class RunTrace:
    mode: str
    iterations: list[IterationRecord] = field(default_factory=list)
    stop_reason: str = NO_IMPROVEMENT

    @property
    def rounds(self) -> int:
        return (len(self.iterations) + 1) // 2

    def max_visibility_edges(self) -> int:
        return max((r.visibility_edges for r in self.iterations), default=0)

    def total_solve_ms(self) -> float:
        return sum(r.solve_ms for r in self.iterations)


@dataclass(frozen=True)
class ComparisonReport:
    """Input vs trad-final vs ff-final, with the usual relative deltas.

    Length and area deltas are (trad - ff) / trad * 100, so positive means
    the bend-aware mode won. The bend delta is reported absolutely; the
    relative value falls back to the raw ff bend count when trad finished
    bend-free, so such instances still enter averages.
    """

    input_metrics: Metrics
    trad_metrics: Metrics
    ff_metrics: Metrics
    total_edge_length_delta_pct: float
    max_edge_length_delta_pct: float
    area_delta_pct: float
    bends_delta: int
    bends_delta_rel: float
    trad_iterations: int
    ff_iterations: int
    trad_wall_ms: float
    ff_wall_ms: float

    def as_dict(self) -> dict:
        return {
            "input": self.input_metrics.as_dict(),
            "trad": self.trad_metrics.as_dict(),
            "ff": self.ff_metrics.as_dict(),
            "total_edge_length_delta_pct": self.total_edge_length_delta_pct,
            "max_edge_length_delta_pct": self.max_edge_length_delta_pct,
            "area_delta_pct": self.area_delta_pct,
            "bends_delta": self.bends_delta,
            "bends_delta_rel": self.bends_delta_rel,
            "trad_iterations": self.trad_iterations,
            "ff_iterations": self.ff_iterations,
            "trad_wall_ms": self.trad_wall_ms,
            "ff_wall_ms": self.ff_wall_ms,
        }


def alternate(
    drawing: OrthoDrawing,
    mode: str = TRAD,
    max_iter: int = 50,
    spacing: int = 1,
    audit: bool = True,
) -> tuple[OrthoDrawing, RunTrace]:
    """Apply vertical then horizontal steps until a full round stops helping.

    Stops after max_iter rounds at the latest. Total edge length never
    increases along the trace; a step that did increase it would be a
    pipeline bug and raises from the audit instead.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    report = validate(drawing)
    if not report.ok:
        raise ValueError(f"invalid drawing: {report.violations[0].message}")

    trace = RunTrace(mode=mode)
    current = drawing
    for round_no in range(max_iter):
        length_at_round_start = metrics(current).total_edge_length
        for axis in (VERTICAL, HORIZONTAL):
            before = metrics(current)
            current, info = compact_step_info(current, mode, axis, spacing, audit)
            after = metrics(current)
            if after.total_edge_length > before.total_edge_length:
                raise AssertionError("total edge length increased")
            trace.iterations.append(
                IterationRecord(
                    index=len(trace.iterations),
                    axis=axis,
                    mode=mode,
                    before=before,
                    after=after,
                    nodes=info.nodes,
                    arcs=info.arcs,
                    dissected_edges=info.dissected_edges,
                    visibility_edges=info.visibility_edges,
                    total_cost=info.total_cost,
                    solve_ms=info.solve_ms,
                )
            )
        if metrics(current).total_edge_length == length_at_round_start:
            trace.stop_reason = NO_IMPROVEMENT
            break
    else:
        trace.stop_reason = MAX_ITERATIONS
    return current, trace


def compare(
    drawing: OrthoDrawing,
    max_iter: int = 50,
    spacing: int = 1,
    audit: bool = True,
) -> ComparisonReport:
    """Run both modes from the same input and report the deltas."""
    input_metrics = metrics(drawing)

    t0 = time.perf_counter()
    trad_final, trad_trace = alternate(drawing, TRAD, max_iter, spacing, audit)
    trad_ms = (time.perf_counter() - t0) * 1000.0
    t0 = time.perf_counter()
    ff_final, ff_trace = alternate(drawing, FF, max_iter, spacing, audit)
    ff_ms = (time.perf_counter() - t0) * 1000.0

    trad_m = metrics(trad_final)
    ff_m = metrics(ff_final)

    def pct(trad_value: int, ff_value: int) -> float:
        if trad_value == 0:
            return 0.0
        return (trad_value - ff_value) / trad_value * 100.0

    bends_delta = ff_m.bend_count - trad_m.bend_count
    if trad_m.bend_count == 0:
        bends_delta_rel = float(ff_m.bend_count)
    else:
        bends_delta_rel = bends_delta / trad_m.bend_count * 100.0

    return ComparisonReport(
        input_metrics=input_metrics,
        trad_metrics=trad_m,
        ff_metrics=ff_m,
        total_edge_length_delta_pct=pct(
            trad_m.total_edge_length, ff_m.total_edge_length
        ),
        max_edge_length_delta_pct=pct(trad_m.max_edge_length, ff_m.max_edge_length),
        area_delta_pct=pct(trad_m.area, ff_m.area),
        bends_delta=bends_delta,
        bends_delta_rel=bends_delta_rel,
        trad_iterations=len(trad_trace.iterations),
        ff_iterations=len(ff_trace.iterations),
        trad_wall_ms=trad_ms,
        ff_wall_ms=ff_ms,
    )
