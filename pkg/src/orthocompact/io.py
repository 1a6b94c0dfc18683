"""Drawing file format, SVG rendering, instance generators and the CLI.

The .ogd format is a minimal line-oriented text form:

    OGD 1
    # comment
    V <id> <x> <y>
    E <id> <u> <v> [<x1> <y1> ...]

Bend points are listed from u to v. Files are UTF-8 and diff-friendly;
serialize() emits a canonical ordering so parse(serialize(d)) == d.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from dataclasses import dataclass
from pathlib import Path

from .compact import FF, HORIZONTAL, TRAD, VERTICAL, compact_step_info
from .driver import alternate, compare
from .model import (
    Edge,
    Metrics,
    OrthoDrawing,
    Point,
    direction_of,
    metrics,
    validate,
)
from .oracle import oracle_trad_vertical


class ParseError(Exception):
    def __init__(self, line: int, column: int, message: str):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


class ValidationFailure(Exception):
    def __init__(self, violations):
        self.violations = violations
        details = "; ".join(v.message for v in violations[:5])
        super().__init__(f"invalid drawing: {details}")


# ---------------------------------------------------------------------------
# parsing and serialization


def _parse_int(token: str, line: int, column: int) -> int:
    try:
        return int(token)
    except ValueError:
        raise ParseError(line, column, f"expected an integer, got {token!r}") from None


def parse(data: bytes | str) -> OrthoDrawing:
    """Parse an .ogd file into a validated drawing.

    Collinear interior points are dropped on load; everything else that is
    wrong raises ParseError (syntax) or ValidationFailure (geometry).
    """
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.splitlines()
    if not lines or lines[0].strip() != "OGD 1":
        raise ParseError(1, 1, "missing `OGD 1` header")

    vertices: dict[str, Point] = {}
    edges: list[Edge] = []
    edge_ids: set[str] = set()
    for lineno, raw in enumerate(lines[1:], start=2):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        kind = fields[0]
        if kind == "V":
            if len(fields) != 4:
                raise ParseError(lineno, 1, "V takes exactly: id x y")
            vid = fields[1]
            if vid in vertices:
                raise ParseError(lineno, 3, f"duplicate vertex id {vid!r}")
            x = _parse_int(fields[2], lineno, 3)
            y = _parse_int(fields[3], lineno, 4)
            vertices[vid] = Point(x, y)
        elif kind == "E":
            if len(fields) < 4 or len(fields) % 2 != 0:
                raise ParseError(lineno, 1, "E takes: id u v [x y ...]")
            eid = fields[1]
            if eid in edge_ids:
                raise ParseError(lineno, 3, f"duplicate edge id {eid!r}")
            edge_ids.add(eid)
            u, v = fields[2], fields[3]
            for endpoint in (u, v):
                if endpoint not in vertices:
                    raise ParseError(
                        lineno, 3, f"edge {eid!r} references unknown vertex {endpoint!r}"
                    )
            coords = [
                _parse_int(tok, lineno, 4 + i) for i, tok in enumerate(fields[4:])
            ]
            bends = [Point(coords[i], coords[i + 1]) for i in range(0, len(coords), 2)]
            pts = _drop_collinear([vertices[u], *bends, vertices[v]])
            edges.append(Edge(eid, u, v, tuple(pts[1:-1])))
        else:
            raise ParseError(lineno, 1, f"unknown record {kind!r}")

    drawing = OrthoDrawing(vertices, edges)
    report = validate(drawing)
    if not report.ok:
        raise ValidationFailure(report.violations)
    return drawing


def _drop_collinear(pts: list[Point]) -> list[Point]:
    """Remove duplicate and straight-through points; keep anything odd for
    validate() to report."""
    dedup: list[Point] = []
    for p in pts:
        if not dedup or dedup[-1] != p:
            dedup.append(p)
    if len(dedup) < 3:
        return dedup
    out = [dedup[0]]
    for p in dedup[1:]:
        while len(out) >= 2:
            a, b = out[-2], out[-1]
            same_axis = (a.x == b.x == p.x) or (a.y == b.y == p.y)
            if same_axis and direction_of(a, b) == direction_of(b, p):
                out.pop()
                continue
            break
        out.append(p)
    return out


def serialize(drawing: OrthoDrawing) -> str:
    """Canonical text form; stable ordering, one element per line."""
    lines = ["OGD 1"]
    for vid in sorted(drawing.vertices):
        if any(ch.isspace() for ch in vid):
            raise ValueError(f"vertex id {vid!r} contains whitespace")
        p = drawing.vertices[vid]
        lines.append(f"V {vid} {p.x} {p.y}")
    for e in sorted(drawing.edges, key=lambda e: e.id):
        if any(ch.isspace() for ch in e.id):
            raise ValueError(f"edge id {e.id!r} contains whitespace")
        coords = " ".join(f"{b.x} {b.y}" for b in e.bends)
        suffix = f" {coords}" if coords else ""
        lines.append(f"E {e.id} {e.u} {e.v}{suffix}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# metrics records


@dataclass(frozen=True)
class MetricsRecord:
    """One line-delimited record per compaction run."""

    instance: str
    mode: str
    iterations: int
    total_edge_length: int
    max_edge_length: int
    width: int
    height: int
    area: int
    bends: int
    dissection_edges: int
    wall_time_ms: float

    def to_json_line(self) -> str:
        return json.dumps(
            {
                "instance": self.instance,
                "mode": self.mode,
                "iterations": self.iterations,
                "total_edge_length": self.total_edge_length,
                "max_edge_length": self.max_edge_length,
                "width": self.width,
                "height": self.height,
                "area": self.area,
                "bends": self.bends,
                "dissection_edges": self.dissection_edges,
                "wall_time_ms": round(self.wall_time_ms, 3),
            },
            sort_keys=True,
        )

    @classmethod
    def from_run(
        cls,
        instance: str,
        mode: str,
        iterations: int,
        m: Metrics,
        dissection_edges: int,
        wall_time_ms: float,
    ) -> MetricsRecord:
        return cls(
            instance=instance,
            mode=mode,
            iterations=iterations,
            total_edge_length=m.total_edge_length,
            max_edge_length=m.max_edge_length,
            width=m.width,
            height=m.height,
            area=m.area,
            bends=m.bend_count,
            dissection_edges=dissection_edges,
            wall_time_ms=wall_time_ms,
        )


# ---------------------------------------------------------------------------
# SVG rendering


def render_svg(
    drawing: OrthoDrawing,
    scale: int = 20,
    highlight: frozenset[str] | set[str] | tuple[str, ...] = (),
) -> bytes:
    """Deterministic SVG: edges as polylines, vertices as filled circles.

    Edges in the highlight set (typically those that gained bends) are drawn
    red. Identical drawings yield identical bytes.
    """
    x0, y0, x1, y1 = drawing.bounding_box()
    margin = scale
    width = (x1 - x0) * scale + 2 * margin
    height = (y1 - y0) * scale + 2 * margin
    highlight = set(highlight)

    def sx(x: int) -> int:
        return (x - x0) * scale + margin

    def sy(y: int) -> int:
        return (y1 - y) * scale + margin  # flip: SVG y grows downward

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    for e in sorted(drawing.edges, key=lambda e: e.id):
        pts = drawing.polyline(e)
        path = " ".join(f"{sx(p.x)},{sy(p.y)}" for p in pts)
        color = "red" if e.id in highlight else "black"
        out.append(
            f'<polyline id="edge-{e.id}" points="{path}" fill="none" '
            f'stroke="{color}" stroke-width="2"/>'
        )
    for vid in sorted(drawing.vertices):
        p = drawing.vertices[vid]
        out.append(
            f'<circle id="vertex-{vid}" cx="{sx(p.x)}" cy="{sy(p.y)}" '
            f'r="4" fill="black"/>'
        )
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


# ---------------------------------------------------------------------------
# generators


def generate(kind: str, n: int, seed: int = 0) -> OrthoDrawing:
    """Deterministic instance families for tests and benchmarks."""
    if n < 1:
        raise ValueError("n must be at least 1")
    if kind == "grid":
        return _gen_grid(n)
    if kind == "comb":
        return _gen_comb(n)
    if kind == "staircase":
        return _gen_staircase(n)
    if kind == "random":
        return _gen_random(n, seed)
    raise ValueError(f"unknown kind {kind!r}")


def _gen_grid(n: int) -> OrthoDrawing:
    vertices = {f"v{i}_{j}": Point(i, j) for i in range(n) for j in range(n)}
    edges = []
    for i in range(n):
        for j in range(n):
            if i + 1 < n:
                edges.append(Edge(f"h{i}_{j}", f"v{i}_{j}", f"v{i+1}_{j}"))
            if j + 1 < n:
                edges.append(Edge(f"u{i}_{j}", f"v{i}_{j}", f"v{i}_{j+1}"))
    return OrthoDrawing(vertices, edges)


def _gen_comb(n: int) -> OrthoDrawing:
    """Rigid frame whose middle rung rewards one double bend.

    The left rail is slack below the rung and unit-subdivided above it, the
    right rail the other way around, so the fixed-shape optimum keeps height
    2n-2 while shifting the rung with one bend reaches height n. Teeth of
    increasing length hang from the rail inside the upper region; the rung
    is the single long connecting edge between the rails. Top and bottom
    bars are unit-subdivided so neither mode can narrow the frame.
    """
    if n < 2:
        raise ValueError("comb needs n >= 2")
    top = 2 * n - 2
    mid = n - 1
    vertices: dict[str, Point] = {}
    edges: list[Edge] = []

    def vertex(name: str, x: int, y: int) -> str:
        vertices[name] = Point(x, y)
        return name

    vertex("lb", 0, 0)
    vertex("rb", n, 0)
    left_chain = ["lb", vertex("lm", 0, mid)]
    for j in range(1, n - 1):
        left_chain.append(vertex(f"l{j}", 0, mid + j))
    left_chain.append(vertex("lt", 0, top))
    right_chain = ["rb"]
    for j in range(1, n - 1):
        right_chain.append(vertex(f"r{j}", n, j))
    right_chain.append(vertex("rm", n, mid))
    right_chain.append(vertex("rt", n, top))

    for i in range(len(left_chain) - 1):
        edges.append(Edge(f"eL{i}", left_chain[i], left_chain[i + 1]))
    for i in range(len(right_chain) - 1):
        edges.append(Edge(f"eR{i}", right_chain[i], right_chain[i + 1]))
    bottom_chain = ["lb"] + [vertex(f"b{i}", i, 0) for i in range(1, n)] + ["rb"]
    top_chain = ["lt"] + [vertex(f"u{i}", i, top) for i in range(1, n)] + ["rt"]
    for i in range(len(bottom_chain) - 1):
        edges.append(Edge(f"eB{i}", bottom_chain[i], bottom_chain[i + 1]))
    for i in range(len(top_chain) - 1):
        edges.append(Edge(f"eT{i}", top_chain[i], top_chain[i + 1]))
    edges.append(Edge("rung", "lm", "rm"))
    for j in range(1, n - 1):
        tip = vertex(f"t{j}", n - 1 - j, mid + j)
        edges.append(Edge(f"tooth{j}", f"l{j}", tip))
    return OrthoDrawing(vertices, edges)


def _gen_staircase(n: int) -> OrthoDrawing:
    """Monotone staircase cycle with n steps."""
    vertices: dict[str, Point] = {}
    names: list[str] = []

    def vertex(x: int, y: int) -> None:
        name = f"s{len(names)}"
        vertices[name] = Point(x, y)
        names.append(name)

    vertex(0, 0)
    for i in range(n):
        vertex(i + 1, i)
        vertex(i + 1, i + 1)
    vertex(0, n)
    edges = [
        Edge(f"e{i}", names[i], names[(i + 1) % len(names)])
        for i in range(len(names))
    ]
    return OrthoDrawing(vertices, edges)


def _gen_random(n: int, seed: int) -> OrthoDrawing:
    """Seeded mutations of a small grid; valid by construction.

    Ops: stretch a gap open, subdivide a segment, delete a non-bridge edge,
    sprout a pendant into empty space. Every op preserves validity, so the
    result needs no repair pass.
    """
    rng = random.Random(f"random:{n}:{seed}")
    k = max(2, min(5, int(round(n ** 0.5))))
    drawing = _gen_grid(k)
    counter = [0]

    ops = max(4, n)
    for _ in range(ops):
        op = rng.choice(("stretch", "subdivide", "delete", "pendant", "pendant"))
        if op == "stretch":
            drawing = _op_stretch(drawing, rng)
        elif op == "subdivide":
            drawing = _op_subdivide(drawing, rng, counter)
        elif op == "delete":
            drawing = _op_delete(drawing, rng)
        elif op == "pendant":
            drawing = _op_pendant(drawing, rng, counter)
        if len(drawing.vertices) >= n and _ >= 3:
            break

    report = validate(drawing)
    assert report.ok, f"generator produced invalid drawing: {report.violations}"
    return drawing


def _op_stretch(drawing: OrthoDrawing, rng: random.Random) -> OrthoDrawing:
    x0, y0, x1, y1 = drawing.bounding_box()
    axis = rng.choice(("x", "y"))
    amount = rng.randint(1, 2)
    if axis == "x" and x1 > x0:
        cut = rng.randint(x0, x1 - 1)

        def move(p: Point) -> Point:
            return Point(p.x + amount if p.x > cut else p.x, p.y)

    elif axis == "y" and y1 > y0:
        cut = rng.randint(y0, y1 - 1)

        def move(p: Point) -> Point:
            return Point(p.x, p.y + amount if p.y > cut else p.y)

    else:
        return drawing
    return OrthoDrawing(
        {vid: move(p) for vid, p in drawing.vertices.items()},
        [Edge(e.id, e.u, e.v, tuple(move(b) for b in e.bends)) for e in drawing.edges],
    )


def _op_subdivide(
    drawing: OrthoDrawing, rng: random.Random, counter: list[int]
) -> OrthoDrawing:
    candidates = [s for s in drawing.segments() if s.length >= 2]
    if not candidates:
        return drawing
    seg = rng.choice(candidates)
    lo, hi = seg.span()
    at = rng.randint(lo + 1, hi - 1)
    p = Point(at, seg.a.y) if seg.horizontal else Point(seg.a.x, at)
    edge = drawing.edge(seg.edge_id)
    pts = drawing.polyline(edge)
    new_vid = f"w{counter[0]}"
    counter[0] += 1
    first = pts[: seg.index + 1] + [p]
    second = [p] + pts[seg.index + 1 :]
    vertices = dict(drawing.vertices)
    vertices[new_vid] = p
    edges = [e for e in drawing.edges if e.id != edge.id]
    edges.append(Edge(f"{edge.id}a", edge.u, new_vid, tuple(first[1:-1])))
    edges.append(Edge(f"{edge.id}b", new_vid, edge.v, tuple(second[1:-1])))
    return OrthoDrawing(vertices, edges)


def _op_delete(drawing: OrthoDrawing, rng: random.Random) -> OrthoDrawing:
    if len(drawing.edges) <= 1:
        return drawing
    order = list(drawing.edges)
    rng.shuffle(order)
    for e in order:
        remaining = [f for f in drawing.edges if f.id != e.id]
        candidate = OrthoDrawing(dict(drawing.vertices), remaining)
        x0, y0, x1, y1 = candidate.bounding_box()
        if x1 == x0 or y1 == y0:
            continue  # keep two-dimensional extent
        if validate(candidate).ok:
            return candidate
    return drawing


def _op_pendant(
    drawing: OrthoDrawing, rng: random.Random, counter: list[int]
) -> OrthoDrawing:
    occupied: set[Point] = set()
    for s in drawing.segments():
        lo, hi = s.span()
        if s.horizontal:
            occupied.update(Point(x, s.a.y) for x in range(lo, hi + 1))
        else:
            occupied.update(Point(s.a.x, y) for y in range(lo, hi + 1))
    occupied.update(drawing.all_points())

    vids = sorted(drawing.vertices)
    rng.shuffle(vids)
    steps = {"E": (1, 0), "N": (0, 1), "W": (-1, 0), "S": (0, -1)}
    for vid in vids:
        p = drawing.vertices[vid]
        free = [
            d
            for d in ("E", "N", "W", "S")
            if all(
                Point(p.x + steps[d][0] * t, p.y + steps[d][1] * t) not in occupied
                for t in (1,)
            )
        ]
        taken_dirs = set()
        for e in drawing.incident_edges(vid):
            pts = drawing.polyline(e)
            if e.u == vid:
                taken_dirs.add(direction_of(pts[0], pts[1]))
            if e.v == vid:
                taken_dirs.add(direction_of(pts[-1], pts[-2]))
        free = [d for d in free if d not in taken_dirs]
        if not free:
            continue
        d = rng.choice(free)
        q = Point(p.x + steps[d][0], p.y + steps[d][1])
        new_vid = f"p{counter[0]}"
        counter[0] += 1
        vertices = dict(drawing.vertices)
        vertices[new_vid] = q
        edges = list(drawing.edges) + [Edge(f"pe{counter[0]}", vid, new_vid)]
        candidate = OrthoDrawing(vertices, edges)
        if validate(candidate).ok:
            return candidate
    return drawing


# ---------------------------------------------------------------------------
# CLI


def _read_input(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    return Path(path).read_text(encoding="utf-8")


def _write_output(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8")


def _append_metrics(path: str | None, records: list[MetricsRecord]) -> None:
    if not path:
        return
    with open(path, "a", encoding="utf-8") as fh:
        for record in records:
            fh.write(record.to_json_line() + "\n")


def _axis_name(flag: str) -> str:
    return VERTICAL if flag == "y" else HORIZONTAL


def _instance_name(path: str) -> str:
    return "stdin" if path == "-" else Path(path).stem


def cli(argv: list[str] | None = None) -> int:
    """Entry point; returns the process exit code.

    0 on success, 1 on parse/validation failures, 2 on usage errors.
    """
    parser = argparse.ArgumentParser(
        prog="orthocompact",
        description="One-dimensional compaction of orthogonal grid drawings.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", help="check a drawing file")
    p.add_argument("file")

    p = sub.add_parser("compact", help="compact a drawing")
    p.add_argument("file")
    p.add_argument("--mode", choices=(TRAD, FF), default=TRAD)
    p.add_argument("--axis", choices=("x", "y", "both"), default="both")
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--spacing", type=int, default=1)
    p.add_argument("--out")
    p.add_argument("--svg")
    p.add_argument("--metrics", dest="metrics_path")

    p = sub.add_parser("compare", help="run both modes and report deltas")
    p.add_argument("file")
    p.add_argument("--max-iter", type=int, default=50)
    p.add_argument("--spacing", type=int, default=1)
    p.add_argument("--metrics", dest="metrics_path")

    p = sub.add_parser("gen", help="generate an instance")
    p.add_argument("--kind", choices=("grid", "comb", "staircase", "random"), required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")

    p = sub.add_parser("metrics", help="print metrics of a drawing")
    p.add_argument("file", nargs="?", default="-")

    p = sub.add_parser("oracle", help="brute-force one-dimensional optimum")
    p.add_argument("file")
    p.add_argument("--axis", choices=("x", "y"), default="y")

    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    try:
        return _dispatch(args)
    except (ParseError, ValidationFailure) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def _dispatch(args: argparse.Namespace) -> int:
    if args.command == "validate":
        try:
            parse(_read_input(args.file))
        except ValidationFailure as exc:
            for v in exc.violations:
                print(f"{v.code}: {v.message}", file=sys.stderr)
            return 1
        print("ok")
        return 0

    if args.command == "compact":
        drawing = parse(_read_input(args.file))
        t0 = time.perf_counter()
        if args.axis == "both":
            result, trace = alternate(
                drawing, args.mode, args.max_iter, args.spacing
            )
            iterations = len(trace.iterations)
            dissection_edges = trace.max_visibility_edges()
        else:
            result, info = compact_step_info(
                drawing, args.mode, _axis_name(args.axis), args.spacing
            )
            iterations = 1
            dissection_edges = info.visibility_edges
        wall_ms = (time.perf_counter() - t0) * 1000.0
        _write_output(args.out, serialize(result))
        if args.svg:
            grown = {
                e.id
                for e in result.edges
                if len(e.bends) > len(drawing.edge(e.id).bends)
            }
            Path(args.svg).write_bytes(render_svg(result, highlight=grown))
        _append_metrics(
            args.metrics_path,
            [
                MetricsRecord.from_run(
                    _instance_name(args.file),
                    args.mode,
                    iterations,
                    metrics(result),
                    dissection_edges,
                    wall_ms,
                )
            ],
        )
        return 0

    if args.command == "compare":
        drawing = parse(_read_input(args.file))
        report = compare(drawing, args.max_iter, args.spacing)
        print(json.dumps(report.as_dict(), sort_keys=True))
        _append_metrics(
            args.metrics_path,
            [
                MetricsRecord.from_run(
                    _instance_name(args.file),
                    TRAD,
                    report.trad_iterations,
                    report.trad_metrics,
                    0,
                    report.trad_wall_ms,
                ),
                MetricsRecord.from_run(
                    _instance_name(args.file),
                    FF,
                    report.ff_iterations,
                    report.ff_metrics,
                    0,
                    report.ff_wall_ms,
                ),
            ],
        )
        return 0

    if args.command == "gen":
        drawing = generate(args.kind, args.n, args.seed)
        _write_output(args.out, serialize(drawing))
        return 0

    if args.command == "metrics":
        drawing = parse(_read_input(args.file))
        record = metrics(drawing)
        print(json.dumps(record.as_dict(), sort_keys=True))
        return 0

    if args.command == "oracle":
        drawing = parse(_read_input(args.file))
        frame = drawing if args.axis == "y" else drawing.transposed()
        result = oracle_trad_vertical(frame)
        print(json.dumps({"axis": args.axis, "optimum": result.optimum}))
        return 0

    raise AssertionError(f"unhandled command {args.command}")


def main() -> None:
    sys.exit(cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
