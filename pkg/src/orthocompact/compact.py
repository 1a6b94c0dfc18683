"""Build compaction flow networks, solve them, and realize the result.

One compaction step normalizes the drawing, dissects it vertically, builds a
circulation network whose nodes are faces and whose arcs are vertical
segments, solves for a minimum-cost integer flow and translates arc flows
back into segment lengths. The bend-aware mode (ff) adds a pair of arcs per
artificial bend vertex so flow can shift between horizontally separated
faces, creating or collapsing double bends.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .dissect import (
    BendVertex,
    DissectedDrawing,
    dissection_size,
    insert_bend_vertices,
    vertical_dissect,
)
from .flow import Flow, FlowNetwork, certify_optimal, solve_min_cost
from .model import (
    Dart,
    Edge,
    OrthoDrawing,
    Point,
    compute_embedding,
    direction_of,
    metrics,
    star_geometry,
    total_vertical_length,
    validate,
)
from .normalize import NormalizedDrawing, _canonical_polyline, normalize, strip_empty_grid_lines

TRAD = "trad"
FF = "ff"
VERTICAL = "vertical"
HORIZONTAL = "horizontal"


class CompactionError(Exception):
    """Internal inconsistency while compacting; indicates a pipeline bug."""


@dataclass
class NetworkMap:
    """How network elements correspond to drawing elements."""

    face_node: dict[str, int]
    edge_arc: dict[str, int]  # vertical piece id -> arc index
    bend_arcs: dict[str, tuple[int | None, int | None]]  # vertex -> (a_up, a_down)
    middle_arcs: set[int] = field(default_factory=set)


@dataclass
class StepInfo:
    """Diagnostics for one compaction step, in the compaction frame."""

    mode: str
    axis: str
    nodes: int
    arcs: int
    dissected_vertices: int
    dissected_edges: int
    visibility_edges: int
    total_cost: int
    length_before: int
    length_after: int
    solve_ms: float
    certified: bool | None = None


def middle_segments(drawing: OrthoDrawing) -> set[tuple[str, int]]:
    """Vertical polyline segments that form the middle of a double bend.

    A segment qualifies iff both neighbouring segments along the edge are
    horizontal and the two turns have opposite senses; segments incident to
    a real vertex never qualify.
    """
    result: set[tuple[str, int]] = set()
    for e in drawing.edges:
        pts = drawing.polyline(e)
        n_segs = len(pts) - 1
        for i in range(1, n_segs - 1):
            a, b = pts[i], pts[i + 1]
            if a.x != b.x:
                continue  # horizontal
            d_prev = direction_of(pts[i - 1], pts[i])
            d_here = direction_of(pts[i], pts[i + 1])
            d_next = direction_of(pts[i + 1], pts[i + 2])
            if d_prev == d_next:  # opposite turn senses: straight resumes
                result.add((e.id, i))
    return result


def _vertical_darts(dd: DissectedDrawing, edge: Edge) -> tuple[Dart, Dart]:
    """(upward, downward) darts of a vertical piece."""
    a = dd.drawing.vertices[edge.u]
    b = dd.drawing.vertices[edge.v]
    up_is_u = a.y < b.y
    return Dart(edge.id, up_is_u), Dart(edge.id, not up_is_u)


def _build_network(dd: DissectedDrawing, ff: bool) -> tuple[FlowNetwork, NetworkMap]:
    embedding = compute_embedding(dd.drawing)
    net = FlowNetwork()
    face_node = {f.id: net.add_node(0) for f in embedding.faces}
    face_of = embedding.face_of_dart

    edge_arc: dict[str, int] = {}
    middle_arcs: set[int] = set()
    for e in dd.drawing.edges:
        a, b = dd.drawing.vertices[e.u], dd.drawing.vertices[e.v]
        if a.x != b.x:
            continue  # only vertical pieces carry length in this direction
        dart_up, dart_down = _vertical_darts(dd, e)
        left = face_node[face_of[dart_up]]
        right = face_node[face_of[dart_down]]
        is_visibility = dd.edge_kind[e.id] == "visibility"
        lower = 1
        if ff and e.id in dd.middle_pieces:
            lower = 0
        cost = 0 if is_visibility else 1
        idx = net.add_arc(left, right, lower, None, cost)
        edge_arc[e.id] = idx
        if ff and e.id in dd.middle_pieces:
            middle_arcs.add(idx)

    bend_arcs: dict[str, tuple[int | None, int | None]] = {}
    if ff:
        dart_toward: dict[str, dict[str, Dart]] = {v: {} for v in dd.drawing.vertices}
        pos = dd.drawing.vertices
        for e in dd.drawing.edges:
            d = direction_of(pos[e.u], pos[e.v])
            dart_toward[e.u][d] = Dart(e.id, True)
            dart_toward[e.v][direction_of(pos[e.v], pos[e.u])] = Dart(e.id, False)
        for bv in dd.bend_vertices:
            at = dart_toward[bv.vertex_id]
            lower_left = face_node[face_of[at["W"]]]
            upper_right = face_node[face_of[at["E"]]]
            upper_left = face_node[face_of[at["N"]]] if "N" in at else upper_right
            lower_right = face_node[face_of[at["S"]]] if "S" in at else lower_left
            a_up = (
                net.add_arc(lower_left, upper_right, 0, None, 1)
                if lower_left != upper_right
                else None
            )
            a_down = (
                net.add_arc(upper_left, lower_right, 0, None, 1)
                if upper_left != lower_right
                else None
            )
            bend_arcs[bv.vertex_id] = (a_up, a_down)

    return net, NetworkMap(face_node, edge_arc, bend_arcs, middle_arcs)


def build_trad_network(dd: DissectedDrawing) -> tuple[FlowNetwork, NetworkMap]:
    """Fixed-shape network: one node per face, one unit-lower-bound arc per
    vertical piece from its left face to its right face; dummy pieces cost
    nothing, real ones cost one per unit of length."""
    return _build_network(dd, ff=False)


def build_ff_network(dd: DissectedDrawing) -> tuple[FlowNetwork, NetworkMap]:
    """Bend-aware network: the fixed-shape construction plus two zero-lower-
    bound arcs per bend vertex (lower-left to upper-right and upper-left to
    lower-right) and relaxed lower bounds on middle segments. Would-be
    self-loops at the outer boundary are omitted."""
    return _build_network(dd, ff=True)


def initial_flow(dd: DissectedDrawing, net: FlowNetwork, netmap: NetworkMap) -> Flow:
    """The input drawing's own segment lengths, packaged as a flow.

    Feasible for every network built from a valid drawing, which is also why
    the solver can never report infeasibility on them.
    """
    values = [0] * len(net.arcs)
    for pid, idx in netmap.edge_arc.items():
        e = dd.drawing.edge(pid)
        a, b = dd.drawing.vertices[e.u], dd.drawing.vertices[e.v]
        values[idx] = abs(a.y - b.y)
    total = sum(x * a.cost for x, a in zip(values, net.arcs))
    return Flow(tuple(values), total)


# ---------------------------------------------------------------------------
# realization


def realize(
    dd: DissectedDrawing, flow: Flow, netmap: NetworkMap
) -> OrthoDrawing:
    """Turn a feasible flow into a drawing.

    Vertical pieces get their arc's flow as length; a bend vertex whose
    upward arc carries k becomes a double bend descending k units (the
    downward arc ascends); middle pieces with zero flow collapse. The new
    y-coordinates follow from one traversal, anchored at zero, and empty
    grid rows are stripped. Dummy elements disappear because output
    polylines are rebuilt from the original edge chains only.
    """
    drawing = dd.drawing
    pos = drawing.vertices

    jog: dict[str, int] = {}
    for bv in dd.bend_vertices:
        a_up, a_down = netmap.bend_arcs.get(bv.vertex_id, (None, None))
        k_up = flow.values[a_up] if a_up is not None else 0
        k_down = flow.values[a_down] if a_down is not None else 0
        # Both positive would be a residual negative cycle, so it cannot
        # happen in an optimal flow; cancel the common amount regardless.
        if k_up != k_down:
            jog[bv.vertex_id] = k_down - k_up

    def k_down_of(vid: str) -> int:
        return max(jog.get(vid, 0), 0)

    def k_up_of(vid: str) -> int:
        return max(-jog.get(vid, 0), 0)

    # One constraint per dissected edge; traverse and check consistency.
    adjacency: dict[str, list[tuple[str, int]]] = {v: [] for v in drawing.vertices}
    for e in drawing.edges:
        pa, pb = pos[e.u], pos[e.v]
        if pa.y == pb.y:
            west, east = (e.u, e.v) if pa.x < pb.x else (e.v, e.u)
            delta = jog.get(west, 0) if west in jog else 0
            adjacency[west].append((east, delta))
            adjacency[east].append((west, -delta))
        else:
            bottom, top = (e.u, e.v) if pa.y < pb.y else (e.v, e.u)
            length = flow.values[netmap.edge_arc[e.id]]
            if dd.edge_kind[e.id] == "visibility":
                delta = k_down_of(bottom) + length + k_up_of(top)
            else:
                delta = length
            adjacency[bottom].append((top, delta))
            adjacency[top].append((bottom, -delta))

    level: dict[str, int] = {}
    for start in sorted(drawing.vertices):
        if start in level:
            continue
        level[start] = 0
        stack = [start]
        while stack:
            u = stack.pop()
            for v, delta in adjacency[u]:
                want = level[u] + delta
                if v in level:
                    if level[v] != want:
                        raise CompactionError(
                            f"inconsistent length assignment at {v}: "
                            f"{level[v]} vs {want}"
                        )
                else:
                    level[v] = want
                    stack.append(v)

    # Rebuild original polylines from the chains; dummies vanish.
    out_edges: list[Edge] = []
    vertical_after = 0
    for orig_id in sorted(dd.chains):
        chain = dd.chains[orig_id]
        points: list[Point] = []
        for i, vid in enumerate(chain):
            x = pos[vid].x
            y = level[vid]
            if vid in jog and 0 < i < len(chain) - 1:
                east_level = y + jog[vid]
                prev_x = pos[chain[i - 1]].x
                if prev_x < x:  # walking eastward
                    points.append(Point(x, y))
                    points.append(Point(x, east_level))
                else:
                    points.append(Point(x, east_level))
                    points.append(Point(x, y))
            else:
                points.append(Point(x, y))
        _check_run_monotonicity(orig_id, chain, pos)
        vertical_after += sum(
            abs(a.y - b.y) for a, b in zip(points, points[1:])
        )
        cleaned = _canonical_polyline(points, orig_id)
        out_edges.append(
            Edge(orig_id, chain[0], chain[-1], tuple(cleaned[1:-1]))
        )

    if flow.total_cost != vertical_after:
        raise CompactionError(
            f"flow cost {flow.total_cost} != realized vertical length {vertical_after}"
        )

    out_vertices = {
        vid: Point(pos[vid].x, level[vid])
        for vid, kind in dd.vertex_kind.items()
        if kind == "original"
    }
    out = OrthoDrawing(out_vertices, out_edges)
    return strip_empty_grid_lines(out, axes=("y",))


def _check_run_monotonicity(
    orig_id: str, chain: list[str], pos: dict[str, Point]
) -> None:
    """Each maximal horizontal run of the input chain must be x-monotone.

    Holds by construction (x-coordinates are fixed); violations indicate
    corrupted chain bookkeeping.
    """
    direction = 0
    prev = pos[chain[0]]
    for vid in chain[1:]:
        cur = pos[vid]
        if cur.y != prev.y:
            direction = 0
        else:
            step = 1 if cur.x > prev.x else -1
            if direction and step != direction:
                raise CompactionError(
                    f"edge {orig_id}: horizontal run is not x-monotone"
                )
            direction = step
        prev = cur


# ---------------------------------------------------------------------------
# one full compaction step


def compact_step(
    drawing: OrthoDrawing,
    mode: str = TRAD,
    axis: str = VERTICAL,
    spacing: int = 1,
    audit: bool = True,
) -> OrthoDrawing:
    """Run one one-dimensional compaction step and return the new drawing."""
    out, _ = compact_step_info(drawing, mode, axis, spacing, audit)
    return out


def compact_step_info(
    drawing: OrthoDrawing,
    mode: str = TRAD,
    axis: str = VERTICAL,
    spacing: int = 1,
    audit: bool = True,
) -> tuple[OrthoDrawing, StepInfo]:
    """compact_step plus diagnostics about the solved network."""
    if mode not in (TRAD, FF):
        raise ValueError(f"unknown mode {mode!r}")
    if axis not in (VERTICAL, HORIZONTAL):
        raise ValueError(f"unknown axis {axis!r}")

    report = validate(drawing)
    if not report.ok:
        raise ValueError(f"invalid drawing: {report.violations[0].message}")

    frame = drawing if axis == VERTICAL else drawing.transposed()
    out_frame, info = _vertical_step(frame, mode, spacing, audit)
    info.axis = axis
    out = out_frame if axis == VERTICAL else out_frame.transposed()

    if audit:
        _audit_step(drawing, out, axis)
    return out, info


def _vertical_step(
    frame: OrthoDrawing, mode: str, spacing: int, audit: bool
) -> tuple[OrthoDrawing, StepInfo]:
    nd = normalize(frame)
    bend_vertices: list[BendVertex] = []
    middles: frozenset[str] = frozenset()
    if mode == FF:
        mid_segments = middle_segments(frame)
        nd, bend_vertices = insert_bend_vertices(nd, spacing)
        middles = frozenset(
            pid
            for pid, origin in nd.pieces.items()
            if origin in mid_segments
        )
    dd = vertical_dissect(
        nd,
        treat_bend_vertices_as_reflex=(mode == FF),
        bend_vertices=bend_vertices,
        middle_pieces=middles,
    )
    build = build_ff_network if mode == FF else build_trad_network
    net, netmap = build(dd)
    t0 = time.perf_counter()
    flow = solve_min_cost(net)
    solve_ms = (time.perf_counter() - t0) * 1000.0
    certified: bool | None = None
    if audit:
        certified = certify_optimal(net, flow)
        if not certified:
            raise CompactionError("solver produced a non-optimal flow")
    out = realize(dd, flow, netmap)
    n_verts, n_edges = dissection_size(dd)
    info = StepInfo(
        mode=mode,
        axis=VERTICAL,
        nodes=net.node_count,
        arcs=len(net.arcs),
        dissected_vertices=n_verts,
        dissected_edges=n_edges,
        visibility_edges=len(dd.visibility_edges()),
        total_cost=flow.total_cost,
        length_before=total_vertical_length(frame),
        length_after=total_vertical_length(out),
        solve_ms=solve_ms,
        certified=certified,
    )
    # realize() has already checked cost == pre-strip vertical length;
    # stripping empty rows may shorten further, never lengthen.
    if info.length_after > info.length_before:
        raise CompactionError("compaction increased the directed length")
    return out, info


def _audit_step(before: OrthoDrawing, after: OrthoDrawing, axis: str) -> None:
    report = validate(after)
    if not report.ok:
        raise CompactionError(
            f"step output is invalid: {report.violations[0].message}"
        )
    for vid, p in before.vertices.items():
        q = after.vertices[vid]
        if axis == VERTICAL and p.x != q.x:
            raise CompactionError(f"vertical step moved {vid} horizontally")
        if axis == HORIZONTAL and p.y != q.y:
            raise CompactionError(f"horizontal step moved {vid} vertically")
    if star_geometry(before) != star_geometry(after):
        raise CompactionError("step changed the vertex star geometry")
    faces_before = len(compute_embedding(before).faces)
    faces_after = len(compute_embedding(after).faces)
    if faces_before != faces_after:
        raise CompactionError("step changed the face structure")
