"""Core data model: grid points, orthogonal drawings, embeddings, metrics.

A drawing places vertices on integer grid points and draws every edge as an
axis-parallel polyline. All operations here are pure; drawings are treated as
immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Iterator, NamedTuple

# Compass directions, counter-clockwise starting East.
EAST, NORTH, WEST, SOUTH = "E", "N", "W", "S"
DIRECTIONS = (EAST, NORTH, WEST, SOUTH)

_ANGLE = {EAST: 0, NORTH: 90, WEST: 180, SOUTH: 270}
_OPPOSITE = {EAST: WEST, WEST: EAST, NORTH: SOUTH, SOUTH: NORTH}


class Point(NamedTuple):
    x: int
    y: int

    def transposed(self) -> Point:
        return Point(self.y, self.x)

    def shifted(self, dx: int, dy: int) -> Point:
        return Point(self.x + dx, self.y + dy)


def direction_of(a: Point, b: Point) -> str:
    """Compass direction of the axis-parallel step from a to b."""
    if a.x == b.x:
        if b.y > a.y:
            return NORTH
        if b.y < a.y:
            return SOUTH
    elif a.y == b.y:
        return EAST if b.x > a.x else WEST
    raise ValueError(f"points {a} and {b} are not axis-aligned or coincide")


def opposite(direction: str) -> str:
    return _OPPOSITE[direction]


def ccw_gap(a: str, b: str) -> int:
    """Counter-clockwise angle in degrees from direction a to b; 0 maps to 360."""
    gap = (_ANGLE[b] - _ANGLE[a]) % 360
    return gap if gap else 360


def turn_angle(heading_in: str, heading_out: str) -> int:
    """Signed turn when arriving with one heading and leaving with another.

    +90 is a left turn, -90 right, -180 a u-turn, 0 straight on.
    """
    gap = (_ANGLE[heading_out] - _ANGLE[heading_in]) % 360
    return {0: 0, 90: 90, 180: -180, 270: -90}[gap]


@dataclass(frozen=True)
class Edge:
    """Undirected edge drawn as a polyline from u to v with interior bends."""

    id: str
    u: str
    v: str
    bends: tuple[Point, ...] = ()

    def other(self, vertex: str) -> str:
        return self.v if vertex == self.u else self.u


class Dart(NamedTuple):
    """Directed traversal of an edge; tail_is_u selects the direction."""

    edge_id: str
    tail_is_u: bool

    def reversed(self) -> Dart:
        return Dart(self.edge_id, not self.tail_is_u)


@dataclass(frozen=True)
class Segment:
    """One axis-parallel piece of an edge polyline."""

    edge_id: str
    index: int
    a: Point
    b: Point

    @property
    def horizontal(self) -> bool:
        return self.a.y == self.b.y

    @property
    def length(self) -> int:
        return abs(self.a.x - self.b.x) + abs(self.a.y - self.b.y)

    def span(self) -> tuple[int, int]:
        """(min, max) along the segment's axis of extent."""
        if self.horizontal:
            return (min(self.a.x, self.b.x), max(self.a.x, self.b.x))
        return (min(self.a.y, self.b.y), max(self.a.y, self.b.y))


class OrthoDrawing:
    """Planar orthogonal grid drawing of a connected 4-graph.

    The constructor only normalizes storage order; call validate() to check
    the geometric invariants.
    """

    def __init__(self, vertices: dict[str, Point], edges: Iterable[Edge]):
        self.vertices: dict[str, Point] = {
            vid: Point(*vertices[vid]) for vid in sorted(vertices)
        }
        self.edges: list[Edge] = sorted(edges, key=lambda e: e.id)
        self._by_id = {e.id: e for e in self.edges}
        if len(self._by_id) != len(self.edges):
            raise ValueError("duplicate edge ids")

    def edge(self, edge_id: str) -> Edge:
        return self._by_id[edge_id]

    def polyline(self, edge: Edge | str) -> list[Point]:
        e = edge if isinstance(edge, Edge) else self._by_id[edge]
        return [self.vertices[e.u], *e.bends, self.vertices[e.v]]

    def segments(self, edge: Edge | str | None = None) -> Iterator[Segment]:
        edges = [edge] if edge is not None else self.edges
        for e in edges:
            if not isinstance(e, Edge):
                e = self._by_id[e]
            pts = self.polyline(e)
            for i in range(len(pts) - 1):
                yield Segment(e.id, i, pts[i], pts[i + 1])

    def incident_edges(self, vertex: str) -> list[Edge]:
        return [e for e in self.edges if vertex in (e.u, e.v)]

    def degree(self, vertex: str) -> int:
        return sum((e.u == vertex) + (e.v == vertex) for e in self.edges)

    def all_points(self) -> Iterator[Point]:
        """Vertex positions and bend points (the occupied grid points)."""
        yield from self.vertices.values()
        for e in self.edges:
            yield from e.bends

    def bounding_box(self) -> tuple[int, int, int, int]:
        pts = list(self.all_points())
        if not pts:
            return (0, 0, 0, 0)
        xs = [p.x for p in pts]
        ys = [p.y for p in pts]
        return (min(xs), min(ys), max(xs), max(ys))

    def transposed(self) -> OrthoDrawing:
        """Reflection across the main diagonal; swaps the two axes."""
        return OrthoDrawing(
            {vid: p.transposed() for vid, p in self.vertices.items()},
            [
                Edge(e.id, e.u, e.v, tuple(p.transposed() for p in e.bends))
                for e in self.edges
            ],
        )

    def translated(self, dx: int, dy: int) -> OrthoDrawing:
        return OrthoDrawing(
            {vid: p.shifted(dx, dy) for vid, p in self.vertices.items()},
            [
                Edge(e.id, e.u, e.v, tuple(p.shifted(dx, dy) for p in e.bends))
                for e in self.edges
            ],
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrthoDrawing):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __repr__(self) -> str:
        return f"OrthoDrawing({len(self.vertices)} vertices, {len(self.edges)} edges)"


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    elements: tuple[str, ...] = ()


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, code: str, message: str, *elements: str) -> None:
        self.violations.append(Violation(code, message, tuple(elements)))

    def __bool__(self) -> bool:  # truthy when clean, like an "is valid" flag
        return self.ok


@dataclass(frozen=True)
class Metrics:
    total_edge_length: int
    max_edge_length: int
    width: int
    height: int
    area: int
    bend_count: int

    def as_dict(self) -> dict[str, int]:
        return {
            "total_edge_length": self.total_edge_length,
            "max_edge_length": self.max_edge_length,
            "width": self.width,
            "height": self.height,
            "area": self.area,
            "bend_count": self.bend_count,
        }


@dataclass(frozen=True)
class Face:
    id: str
    boundary: tuple[Dart, ...]
    is_external: bool


@dataclass
class Embedding:
    faces: list[Face]
    external_face: str
    rotation: dict[str, list[Dart]]
    face_of_dart: dict[Dart, str]

    def face(self, face_id: str) -> Face:
        return next(f for f in self.faces if f.id == face_id)

    @property
    def internal_faces(self) -> list[Face]:
        return [f for f in self.faces if not f.is_external]


# ---------------------------------------------------------------------------
# validation


def _segment_intersection(s1: Segment, s2: Segment) -> tuple[str, Point | None]:
    """Classify the intersection of two axis-parallel segments.

    Returns ("none", None), ("point", p) or ("overlap", None).
    """
    if s1.horizontal and s2.horizontal:
        if s1.a.y != s2.a.y:
            return ("none", None)
        lo = max(s1.span()[0], s2.span()[0])
        hi = min(s1.span()[1], s2.span()[1])
        if lo > hi:
            return ("none", None)
        if lo == hi:
            return ("point", Point(lo, s1.a.y))
        return ("overlap", None)
    if not s1.horizontal and not s2.horizontal:
        if s1.a.x != s2.a.x:
            return ("none", None)
        lo = max(s1.span()[0], s2.span()[0])
        hi = min(s1.span()[1], s2.span()[1])
        if lo > hi:
            return ("none", None)
        if lo == hi:
            return ("point", Point(s1.a.x, lo))
        return ("overlap", None)
    h, v = (s1, s2) if s1.horizontal else (s2, s1)
    x, y = v.a.x, h.a.y
    if h.span()[0] <= x <= h.span()[1] and v.span()[0] <= y <= v.span()[1]:
        return ("point", Point(x, y))
    return ("none", None)


def _segments_conflict(s1: Segment, s2: Segment, shared: set[Point]) -> bool:
    """True if the two segments share a point outside the allowed set."""
    kind, p = _segment_intersection(s1, s2)
    if kind == "none":
        return False
    if kind == "overlap":
        return True
    return p not in shared


def validate(drawing: OrthoDrawing) -> ValidationReport:
    """Check all drawing invariants; an empty report means a valid drawing.

    Violations carry the ids of the offending elements so callers can point
    at the problem. Diagnostics are the return value; nothing raises.
    """
    report = ValidationReport()

    for vid, p in drawing.vertices.items():
        if not (isinstance(p.x, int) and isinstance(p.y, int)):
            report.add("non_integer", f"vertex {vid} not on the grid", vid)

    positions: dict[Point, str] = {}
    for vid, p in drawing.vertices.items():
        if p in positions:
            report.add(
                "vertex_overlap",
                f"vertices {positions[p]} and {vid} share {tuple(p)}",
                positions[p],
                vid,
            )
        else:
            positions[p] = vid

    for e in drawing.edges:
        if e.u not in drawing.vertices or e.v not in drawing.vertices:
            report.add("dangling_edge", f"edge {e.id} references missing vertex", e.id)
            continue
        pts = drawing.polyline(e)
        ok = True
        for i in range(len(pts) - 1):
            a, b = pts[i], pts[i + 1]
            if a == b or (a.x != b.x and a.y != b.y):
                report.add(
                    "bad_segment",
                    f"edge {e.id} has a zero-length or diagonal segment at {tuple(a)}",
                    e.id,
                )
                ok = False
                break
        if not ok:
            continue
        for i in range(1, len(pts) - 1):
            d_in = direction_of(pts[i - 1], pts[i])
            d_out = direction_of(pts[i], pts[i + 1])
            if d_in == d_out or d_in == opposite(d_out):
                report.add(
                    "bad_bend",
                    f"edge {e.id} has a 180-degree point at {tuple(pts[i])}",
                    e.id,
                )

    if not report.ok:
        return report  # geometry below assumes well-formed polylines

    for vid in drawing.vertices:
        if drawing.degree(vid) > 4:
            report.add("degree", f"vertex {vid} has degree > 4", vid)

    # Star geometry: initial directions at each vertex must be distinct.
    for vid, p in drawing.vertices.items():
        seen: dict[str, str] = {}
        for e in drawing.incident_edges(vid):
            for tail_is_u in (True, False):
                if (e.u if tail_is_u else e.v) != vid:
                    continue
                pts = drawing.polyline(e)
                if not tail_is_u:
                    pts = pts[::-1]
                d = direction_of(pts[0], pts[1])
                if d in seen:
                    report.add(
                        "star_geometry",
                        f"edges {seen[d]} and {e.id} both leave {vid} heading {d}",
                        seen[d],
                        e.id,
                    )
                else:
                    seen[d] = e.id

    # Planarity: elements intersect only at shared endpoints.
    segs = list(drawing.segments())
    vertex_points = {p: vid for vid, p in drawing.vertices.items()}
    for i, s1 in enumerate(segs):
        for s2 in segs[i + 1 :]:
            if s1.edge_id == s2.edge_id:
                if abs(s1.index - s2.index) == 1:
                    continue  # consecutive pieces share their bend
                if _segments_conflict(s1, s2, _self_shared(drawing, s1, s2)):
                    report.add(
                        "self_intersection",
                        f"edge {s1.edge_id} intersects itself",
                        s1.edge_id,
                    )
            else:
                shared = _shared_endpoints(drawing, s1.edge_id, s2.edge_id)
                if _segments_conflict(s1, s2, shared):
                    report.add(
                        "planarity",
                        f"edges {s1.edge_id} and {s2.edge_id} intersect",
                        s1.edge_id,
                        s2.edge_id,
                    )
    # A vertex may not lie in the interior of any segment.
    for seg in segs:
        e = drawing.edge(seg.edge_id)
        endpoints = {drawing.vertices[e.u], drawing.vertices[e.v]}
        lo, hi = seg.span()
        for p, vid in vertex_points.items():
            on_segment = (
                (seg.horizontal and p.y == seg.a.y and lo <= p.x <= hi)
                or (not seg.horizontal and p.x == seg.a.x and lo <= p.y <= hi)
            )
            if on_segment and p not in endpoints:
                report.add(
                    "vertex_on_edge",
                    f"vertex {vid} lies on edge {seg.edge_id}",
                    vid,
                    seg.edge_id,
                )

    if not _connected(drawing):
        report.add("disconnected", "drawing is not connected")

    return report


def _shared_endpoints(drawing: OrthoDrawing, e1: str, e2: str) -> set[Point]:
    a, b = drawing.edge(e1), drawing.edge(e2)
    shared = {a.u, a.v} & {b.u, b.v}
    return {drawing.vertices[v] for v in shared}


def _self_shared(drawing: OrthoDrawing, s1: Segment, s2: Segment) -> set[Point]:
    # A self-loop's first and last segments legitimately share the vertex.
    e = drawing.edge(s1.edge_id)
    if e.u == e.v:
        n = len(drawing.polyline(e)) - 1
        if {s1.index, s2.index} == {0, n - 1}:
            return {drawing.vertices[e.u]}
    return set()


def _connected(drawing: OrthoDrawing) -> bool:
    if not drawing.vertices:
        return True
    adjacency: dict[str, list[str]] = {vid: [] for vid in drawing.vertices}
    for e in drawing.edges:
        adjacency[e.u].append(e.v)
        adjacency[e.v].append(e.u)
    start = next(iter(drawing.vertices))
    seen = {start}
    stack = [start]
    while stack:
        for w in adjacency[stack.pop()]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == len(drawing.vertices)


# ---------------------------------------------------------------------------
# star geometry and embedding


def star_geometry(drawing: OrthoDrawing) -> dict[str, dict[str, str]]:
    """Per vertex, the direction of the first polyline segment of each edge."""
    stars: dict[str, dict[str, str]] = {vid: {} for vid in drawing.vertices}
    for e in drawing.edges:
        pts = drawing.polyline(e)
        stars[e.u][e.id] = direction_of(pts[0], pts[1])
        stars[e.v][e.id] = direction_of(pts[-1], pts[-2])
    return stars


def _dart_initial_direction(drawing: OrthoDrawing, dart: Dart) -> str:
    e = drawing.edge(dart.edge_id)
    pts = drawing.polyline(e)
    if not dart.tail_is_u:
        pts = pts[::-1]
    return direction_of(pts[0], pts[1])


def _dart_final_direction(drawing: OrthoDrawing, dart: Dart) -> str:
    e = drawing.edge(dart.edge_id)
    pts = drawing.polyline(e)
    if not dart.tail_is_u:
        pts = pts[::-1]
    return direction_of(pts[-2], pts[-1])


def _dart_turns(drawing: OrthoDrawing, dart: Dart) -> int:
    """Sum of signed turns at the interior bends while traversing the dart."""
    pts = drawing.polyline(dart.edge_id)
    if not dart.tail_is_u:
        pts = pts[::-1]
    total = 0
    for i in range(1, len(pts) - 1):
        total += turn_angle(
            direction_of(pts[i - 1], pts[i]), direction_of(pts[i], pts[i + 1])
        )
    return total


def rotation_system(drawing: OrthoDrawing) -> dict[str, list[Dart]]:
    """Darts leaving each vertex in counter-clockwise geometric order."""
    rotation: dict[str, list[tuple[int, Dart]]] = {v: [] for v in drawing.vertices}
    for e in drawing.edges:
        for tail_is_u in (True, False):
            tail = e.u if tail_is_u else e.v
            d = Dart(e.id, tail_is_u)
            rotation[tail].append((_ANGLE[_dart_initial_direction(drawing, d)], d))
    return {
        v: [d for _, d in sorted(pairs, key=lambda t: (t[0], t[1]))]
        for v, pairs in rotation.items()
    }


def compute_embedding(drawing: OrthoDrawing) -> Embedding:
    """Extract faces from the geometry.

    Faces are orbits of the "arrive, take the clockwise-next dart" rule, which
    keeps each face on the left of its boundary darts. The face whose turn
    angles sum to -360 degrees is external. Face ids are assigned in a
    deterministic traversal order.
    """
    if not _connected(drawing):
        raise ValueError("embedding requires a connected drawing")

    rotation = rotation_system(drawing)

    if not drawing.edges:
        face = Face("f0", (), True)
        return Embedding([face], "f0", rotation, {})

    def head(dart: Dart) -> str:
        e = drawing.edge(dart.edge_id)
        return e.v if dart.tail_is_u else e.u

    def next_dart(dart: Dart) -> Dart:
        w = head(dart)
        rev = dart.reversed()
        darts = rotation[w]
        return darts[darts.index(rev) - 1]

    all_darts = sorted(
        (Dart(e.id, flag) for e in drawing.edges for flag in (True, False))
    )
    face_of_dart: dict[Dart, str] = {}
    faces: list[Face] = []
    external: str | None = None
    for start in all_darts:
        if start in face_of_dart:
            continue
        fid = f"f{len(faces)}"
        boundary = []
        turn_sum = 0
        d = start
        while True:
            face_of_dart[d] = fid
            boundary.append(d)
            turn_sum += _dart_turns(drawing, d)
            nxt = next_dart(d)
            turn_sum += turn_angle(
                _dart_final_direction(drawing, d),
                _dart_initial_direction(drawing, nxt),
            )
            d = nxt
            if d == start:
                break
        if turn_sum not in (360, -360):
            raise AssertionError(f"face {fid} has turn sum {turn_sum}")
        is_external = turn_sum == -360
        if is_external:
            if external is not None:
                raise ValueError("drawing has multiple external faces")
            external = fid
        faces.append(Face(fid, tuple(boundary), is_external))

    if external is None:
        raise AssertionError("no external face found")
    return Embedding(faces, external, rotation, face_of_dart)


# ---------------------------------------------------------------------------
# metrics


def metrics(drawing: OrthoDrawing) -> Metrics:
    """Length, extent and bend counts of a drawing.

    Lengths are Manhattan polyline lengths; width and height are bounding box
    extents over all vertices and bends; area is their product.
    """
    lengths = []
    bends = 0
    for e in drawing.edges:
        pts = drawing.polyline(e)
        lengths.append(
            sum(
                abs(a.x - b.x) + abs(a.y - b.y)
                for a, b in zip(pts, pts[1:])
            )
        )
        bends += len(e.bends)
    x0, y0, x1, y1 = drawing.bounding_box()
    width, height = x1 - x0, y1 - y0
    return Metrics(
        total_edge_length=sum(lengths),
        max_edge_length=max(lengths, default=0),
        width=width,
        height=height,
        area=width * height,
        bend_count=bends,
    )


def total_vertical_length(drawing: OrthoDrawing) -> int:
    return sum(s.length for s in drawing.segments() if not s.horizontal)


def total_horizontal_length(drawing: OrthoDrawing) -> int:
    return sum(s.length for s in drawing.segments() if s.horizontal)
