"""Normalization: trade bends for degree-2 dummy vertices and back.

A normalized drawing has only single-segment edges; every former bend is a
dummy vertex. The chain bookkeeping (original edge -> ordered vertex chain)
is what lets the compaction pipeline rebuild real polylines afterwards.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .model import Edge, OrthoDrawing, Point, direction_of, opposite


@dataclass
class NormalizedDrawing:
    """Bend-free drawing plus the bookkeeping to undo the rewrite.

    pieces maps every single-segment edge id to (original edge id, segment
    index) in the source polyline; chains lists, per original edge, the
    vertex ids from u to v including all dummies.
    """

    drawing: OrthoDrawing
    bend_origin: dict[str, tuple[str, int]]
    chains: dict[str, list[str]]
    pieces: dict[str, tuple[str, int]]

    def piece_between(self, a: str, b: str) -> str:
        """Edge id of the normalized piece joining two chain neighbours."""
        key = (a, b) if a <= b else (b, a)
        return self._piece_index()[key]

    def _piece_index(self) -> dict[tuple[str, str], str]:
        if not hasattr(self, "_pieces_by_pair"):
            index: dict[tuple[str, str], str] = {}
            for e in self.drawing.edges:
                key = (e.u, e.v) if e.u <= e.v else (e.v, e.u)
                index[key] = e.id
            self._pieces_by_pair = index
        return self._pieces_by_pair


def _fresh_id(base: str, taken: set[str]) -> str:
    if base not in taken:
        taken.add(base)
        return base
    k = 1
    while f"{base}_{k}" in taken:
        k += 1
    taken.add(f"{base}_{k}")
    return f"{base}_{k}"


def normalize(drawing: OrthoDrawing) -> NormalizedDrawing:
    """Replace every polyline bend with a degree-2 dummy vertex.

    Geometry is unchanged; bend_origin is a bijection onto the original
    bends. Piece ids are derived from the original edge id and stay stable
    through later splitting.
    """
    vertices = dict(drawing.vertices)
    taken = set(vertices)
    edge_ids = {e.id for e in drawing.edges}
    new_edges: list[Edge] = []
    bend_origin: dict[str, tuple[str, int]] = {}
    chains: dict[str, list[str]] = {}
    pieces: dict[str, tuple[str, int]] = {}

    for e in drawing.edges:
        pts = drawing.polyline(e)
        chain = [e.u]
        for i, bend in enumerate(e.bends):
            did = _fresh_id(f"{e.id}.b{i}", taken)
            vertices[did] = bend
            bend_origin[did] = (e.id, i)
            chain.append(did)
        chain.append(e.v)
        chains[e.id] = chain
        for i in range(len(chain) - 1):
            pid = f"{e.id}~{i}" if len(chain) > 2 else e.id
            while pid in edge_ids and pid != e.id:
                pid = "_" + pid
            edge_ids.add(pid)
            new_edges.append(Edge(pid, chain[i], chain[i + 1]))
            pieces[pid] = (e.id, i)
        del pts

    return NormalizedDrawing(OrthoDrawing(vertices, new_edges), bend_origin, chains, pieces)


def denormalize(nd: NormalizedDrawing) -> OrthoDrawing:
    """Collapse dummy vertices back into polyline bends.

    Dummies whose incident segments became collinear are dropped entirely, so
    iterated compaction never sees phantom bends. A dummy whose two segments
    leave in the same direction is invalid geometry and raises ValueError.
    """
    vertices = {
        vid: p
        for vid, p in nd.drawing.vertices.items()
        if vid not in nd.bend_origin
    }
    edges: list[Edge] = []
    for orig_id, chain in sorted(nd.chains.items()):
        pts = [nd.drawing.vertices[v] for v in chain]
        cleaned = _canonical_polyline(pts, orig_id)
        edges.append(Edge(orig_id, chain[0], chain[-1], tuple(cleaned[1:-1])))
    return OrthoDrawing(vertices, edges)


def _canonical_polyline(pts: list[Point], edge_id: str) -> list[Point]:
    """Drop repeated points and 180-degree interior points; reject overlaps."""
    dedup: list[Point] = []
    for p in pts:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) == 1:
        return dedup
    out: list[Point] = [dedup[0]]
    for p in dedup[1:]:
        while len(out) >= 2:
            d_in = direction_of(out[-2], out[-1])
            d_out = direction_of(out[-1], p)
            if d_in == d_out:
                out.pop()  # straight-through point
                continue
            if d_in == opposite(d_out):
                raise ValueError(
                    f"edge {edge_id}: segments overlap at {tuple(out[-1])}"
                )
            break
        out.append(p)
    return out


def strip_empty_grid_lines(
    drawing: OrthoDrawing, axes: tuple[str, ...] = ("x", "y")
) -> OrthoDrawing:
    """Remove every grid line that carries no vertex and no bend.

    Edges crossing a removed line simply get shorter. Relative coordinate
    order is preserved and the drawing is anchored at zero, so afterwards
    width and height are bounded by the number of occupied grid lines.
    """
    points = list(drawing.all_points())
    if not points:
        return drawing
    remap_x = _compression({p.x for p in points}) if "x" in axes else None
    remap_y = _compression({p.y for p in points}) if "y" in axes else None

    def move(p: Point) -> Point:
        return Point(
            remap_x[p.x] if remap_x is not None else p.x,
            remap_y[p.y] if remap_y is not None else p.y,
        )

    return OrthoDrawing(
        {vid: move(p) for vid, p in drawing.vertices.items()},
        [
            Edge(e.id, e.u, e.v, tuple(move(p) for p in e.bends))
            for e in drawing.edges
        ],
    )


def _compression(used: set[int]) -> dict[int, int]:
    return {value: rank for rank, value in enumerate(sorted(used))}
