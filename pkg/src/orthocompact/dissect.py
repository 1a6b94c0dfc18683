"""Vertical dissection: visibility edges and artificial bend vertices.

Dissection removes reflex corners by shooting vertical rays from them to the
first element visible above/below, splitting hit segments with dummy
vertices. In bend-aware mode every artificial bend vertex additionally gets
rays in both directions, cutting the drawing into unit-width stripes. After
dissection every internal face is a rectangle.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass

from .model import (
    EAST,
    NORTH,
    SOUTH,
    WEST,
    Edge,
    OrthoDrawing,
    Point,
    ccw_gap,
    direction_of,
)
from .normalize import NormalizedDrawing, _fresh_id

_ANGLE = {EAST: 0, NORTH: 90, WEST: 180, SOUTH: 270}


@dataclass(frozen=True)
class BendVertex:
    """Artificial degree-2 vertex on an interior grid point of a horizontal run."""

    vertex_id: str
    edge_id: str  # host original edge
    x: int


@dataclass
class DissectedDrawing:
    """Normalized drawing extended with visibility edges and dummy vertices."""

    drawing: OrthoDrawing
    vertex_kind: dict[str, str]  # original | bend_dummy | bend_vertex | split_dummy
    edge_kind: dict[str, str]  # original | visibility
    bend_vertices: list[BendVertex]
    chains: dict[str, list[str]]  # original edge id -> vertex chain u..v
    pieces: dict[str, tuple[str, int]]  # piece id -> (original edge, segment index)
    middle_pieces: frozenset[str] = frozenset()

    def visibility_edges(self) -> list[Edge]:
        return [e for e in self.drawing.edges if self.edge_kind[e.id] == "visibility"]

    def piece_between(self, a: str, b: str) -> str:
        """Piece id joining two chain neighbours."""
        if not hasattr(self, "_pair_index"):
            index: dict[tuple[str, str], str] = {}
            for e in self.drawing.edges:
                if self.edge_kind[e.id] != "visibility":
                    key = (e.u, e.v) if e.u <= e.v else (e.v, e.u)
                    index[key] = e.id
            self._pair_index = index
        return self._pair_index[(a, b) if a <= b else (b, a)]


def dissection_size(dd: DissectedDrawing) -> tuple[int, int]:
    """(vertex count, edge count) of the dissected drawing."""
    return (len(dd.drawing.vertices), len(dd.drawing.edges))


def _chain_span(chain: list[str], u: str, v: str) -> tuple[int, int]:
    """Indices (i, i+1) of the adjacent chain pair {u, v}."""
    for i in range(len(chain) - 1):
        if {chain[i], chain[i + 1]} == {u, v}:
            return i, i + 1
    raise AssertionError(f"{u},{v} are not chain neighbours")


def _splice(chain: list[str], u: str, v: str, left: str, inner: list[str]) -> list[str]:
    """Insert the new inner vertices between chain neighbours u and v."""
    lo, hi = _chain_span(chain, u, v)
    walk = inner if chain[lo] == left else inner[::-1]
    return chain[: lo + 1] + walk + chain[hi:]


def insert_bend_vertices(
    nd: NormalizedDrawing, spacing: int = 1
) -> tuple[NormalizedDrawing, list[BendVertex]]:
    """Place bend vertices on interior grid points of horizontal pieces.

    With spacing 1 every interior point of every horizontal piece gets one;
    with spacing k only every k-th point counted from the left endpoint.
    Pieces of horizontal length one receive none, so any bend vertex can
    later host a double bend.
    """
    if spacing < 1:
        raise ValueError("spacing must be a positive integer")

    vertices = dict(nd.drawing.vertices)
    taken = set(vertices)
    edges: list[Edge] = []
    pieces: dict[str, tuple[str, int]] = {}
    chains = {eid: list(chain) for eid, chain in nd.chains.items()}
    bend_vertices: list[BendVertex] = []
    counter = 0

    for piece in nd.drawing.edges:
        a = nd.drawing.vertices[piece.u]
        b = nd.drawing.vertices[piece.v]
        orig_edge, seg_index = nd.pieces[piece.id]
        if a.y != b.y or abs(a.x - b.x) < 2:
            edges.append(piece)
            pieces[piece.id] = (orig_edge, seg_index)
            continue
        left, right = (piece.u, piece.v) if a.x < b.x else (piece.v, piece.u)
        lx, rx = min(a.x, b.x), max(a.x, b.x)
        inner: list[str] = []
        for x in range(lx + spacing, rx, spacing):
            vid = _fresh_id(f"bv{counter}", taken)
            counter += 1
            vertices[vid] = Point(x, a.y)
            bend_vertices.append(BendVertex(vid, orig_edge, x))
            inner.append(vid)
        stops = [left, *inner, right]
        for j in range(len(stops) - 1):
            pid = f"{piece.id}~s{j}"
            edges.append(Edge(pid, stops[j], stops[j + 1]))
            pieces[pid] = (orig_edge, seg_index)
        chains[orig_edge] = _splice(chains[orig_edge], piece.u, piece.v, left, inner)

    nd2 = NormalizedDrawing(
        OrthoDrawing(vertices, edges), dict(nd.bend_origin), chains, pieces
    )
    return nd2, bend_vertices


def _open_ray_directions(dirs: list[str], is_bend_vertex: bool) -> list[str]:
    """Vertical directions in which a vertex with these edge directions emits
    a visibility ray.

    A ray goes wherever a reflex corner (>= 270 degrees) spans a free
    vertical direction; bend vertices emit both rays unconditionally.
    """
    out: list[str] = []
    for d in (NORTH, SOUTH):
        if d in dirs:
            continue
        if is_bend_vertex:
            out.append(d)
            continue
        if not dirs:
            continue  # isolated vertex: nothing to separate
        # The corner containing d starts at the present direction just
        # clockwise of d and spans to the ccw-next present direction.
        angle = _ANGLE[d]
        start = min(dirs, key=lambda c: (angle - _ANGLE[c]) % 360)
        corner = 360 if len(dirs) == 1 else min(ccw_gap(start, c) for c in dirs if c != start)
        if corner >= 270:
            out.append(d)
    return out


def vertical_dissect(
    nd: NormalizedDrawing,
    treat_bend_vertices_as_reflex: bool = False,
    bend_vertices: list[BendVertex] | None = None,
    middle_pieces: frozenset[str] = frozenset(),
) -> DissectedDrawing:
    """Insert vertical visibility edges until all internal faces are rectangles.

    Runs a left-to-right sweep over x with events at every vertex; active
    horizontal pieces are kept sorted by y. Touching counts as blocking, and
    a ray that reaches a vertex connects to it directly without a split.
    Rays that escape to infinity add nothing.
    """
    bend_vertices = list(bend_vertices or [])
    bend_ids = {bv.vertex_id for bv in bend_vertices} if treat_bend_vertices_as_reflex else set()

    drawing = nd.drawing
    verts_by_col: dict[int, list[tuple[int, str]]] = {}
    for vid, p in drawing.vertices.items():
        verts_by_col.setdefault(p.x, []).append((p.y, vid))
    for col in verts_by_col.values():
        col.sort()

    starts: dict[int, list[tuple[int, str]]] = {}
    ends: dict[int, list[tuple[int, str]]] = {}
    for e in drawing.edges:
        a, b = drawing.vertices[e.u], drawing.vertices[e.v]
        if a.y == b.y:
            starts.setdefault(min(a.x, b.x), []).append((a.y, e.id))
            ends.setdefault(max(a.x, b.x), []).append((a.y, e.id))

    directions_at: dict[str, set[str]] = {vid: set() for vid in drawing.vertices}
    for e in drawing.edges:
        a, b = drawing.vertices[e.u], drawing.vertices[e.v]
        directions_at[e.u].add(direction_of(a, b))
        directions_at[e.v].add(direction_of(b, a))

    rays_by_col: dict[int, list[tuple[int, str, str]]] = {}
    for vid in drawing.vertices:
        p = drawing.vertices[vid]
        dirs = sorted(directions_at[vid], key=lambda d: _ANGLE[d])
        for d in _open_ray_directions(dirs, vid in bend_ids):
            rays_by_col.setdefault(p.x, []).append((p.y, d, vid))

    active_y: list[int] = []  # sorted y of active horizontal pieces
    active_piece: dict[int, str] = {}
    vis_pairs: set[tuple[str, str]] = set()
    splits: dict[str, dict[int, list[str]]] = {}  # piece -> x -> source vids

    for x in sorted(set(verts_by_col) | set(starts) | set(ends)):
        for y, pid in ends.get(x, ()):  # leave before queries: open interval
            active_y.pop(bisect.bisect_left(active_y, y))
            del active_piece[y]
        col = verts_by_col.get(x, [])
        col_ys = [y for y, _ in col]
        for y, d, vid in sorted(rays_by_col.get(x, ())):
            if d == NORTH:
                i = bisect.bisect_right(col_ys, y)
                vtx = col[i] if i < len(col) else None
                j = bisect.bisect_right(active_y, y)
                seg_y = active_y[j] if j < len(active_y) else None
            else:
                i = bisect.bisect_left(col_ys, y) - 1
                vtx = col[i] if i >= 0 else None
                j = bisect.bisect_left(active_y, y) - 1
                seg_y = active_y[j] if j >= 0 else None
            if vtx is None and seg_y is None:
                continue  # ray escapes to infinity
            if seg_y is None or (vtx is not None and abs(vtx[0] - y) <= abs(seg_y - y)):
                pair = (vid, vtx[1]) if vid <= vtx[1] else (vtx[1], vid)
                vis_pairs.add(pair)
            else:
                splits.setdefault(active_piece[seg_y], {}).setdefault(x, []).append(vid)
        for y, pid in starts.get(x, ()):  # enter after queries
            active_y.insert(bisect.bisect_left(active_y, y), y)
            active_piece[y] = pid

    return _materialize(nd, bend_vertices, vis_pairs, splits, middle_pieces)


def _materialize(
    nd: NormalizedDrawing,
    bend_vertices: list[BendVertex],
    vis_pairs: set[tuple[str, str]],
    splits: dict[str, dict[int, list[str]]],
    middle_pieces: frozenset[str],
) -> DissectedDrawing:
    drawing = nd.drawing
    vertices = dict(drawing.vertices)
    taken = set(vertices)
    chains = {eid: list(chain) for eid, chain in nd.chains.items()}
    pieces = dict(nd.pieces)
    bend_ids = {bv.vertex_id for bv in bend_vertices}

    vertex_kind = {
        vid: (
            "bend_dummy"
            if vid in nd.bend_origin
            else "bend_vertex" if vid in bend_ids else "original"
        )
        for vid in vertices
    }
    edges: list[Edge] = []
    edge_kind: dict[str, str] = {}
    all_pairs = set(vis_pairs)
    split_counter = 0

    for piece in drawing.edges:
        here = splits.get(piece.id)
        if not here:
            edges.append(piece)
            edge_kind[piece.id] = "original"
            continue
        a, b = drawing.vertices[piece.u], drawing.vertices[piece.v]
        left, right = (piece.u, piece.v) if a.x < b.x else (piece.v, piece.u)
        inner: list[str] = []
        for x in sorted(here):
            vid = _fresh_id(f"sp{split_counter}", taken)
            split_counter += 1
            vertices[vid] = Point(x, a.y)
            vertex_kind[vid] = "split_dummy"
            inner.append(vid)
            for source in here[x]:
                all_pairs.add((source, vid) if source <= vid else (vid, source))
        stops = [left, *inner, right]
        orig_edge, seg_index = nd.pieces[piece.id]
        for j in range(len(stops) - 1):
            pid = f"{piece.id}~s{j}"
            edges.append(Edge(pid, stops[j], stops[j + 1]))
            edge_kind[pid] = "original"
            pieces[pid] = (orig_edge, seg_index)
        pieces.pop(piece.id, None)
        chains[orig_edge] = _splice(chains[orig_edge], piece.u, piece.v, left, inner)

    for n, (u, v) in enumerate(sorted(all_pairs)):
        pid = f"vis{n}"
        edges.append(Edge(pid, u, v))
        edge_kind[pid] = "visibility"

    return DissectedDrawing(
        drawing=OrthoDrawing(vertices, edges),
        vertex_kind=vertex_kind,
        edge_kind=edge_kind,
        bend_vertices=bend_vertices,
        chains=chains,
        pieces=pieces,
        middle_pieces=middle_pieces,
    )
