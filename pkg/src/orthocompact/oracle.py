"""Independent brute-force optima for tiny instances.

The vertical-compaction oracle enumerates integer y-assignments for the
rigid horizontal components of a drawing under explicit pairwise
separation constraints, entirely bypassing the dissection/flow pipeline it
is used to check. Exponential, so it refuses anything that is not tiny.
"""

from __future__ import annotations

from dataclasses import dataclass

from .flow import FlowInfeasibleError, FlowNetwork
from .model import Edge, OrthoDrawing, Point, validate


class OracleRefusal(ValueError):
    """Instance exceeds the oracle's hard size limits."""


@dataclass(frozen=True)
class OracleResult:
    optimum: int  # minimal total vertical length
    witness: OrthoDrawing  # one optimal y-assignment


# ---------------------------------------------------------------------------
# vertical compaction oracle


def _point_key(kind: str, *rest) -> tuple:
    return (kind, *rest)


def oracle_trad_vertical(
    drawing: OrthoDrawing, y_range_bound: int | None = None
) -> OracleResult:
    """Exact optimum of shape-preserving vertical compaction.

    Groups points into rigid components (joined by horizontal segments),
    derives difference constraints from every vertically interacting pair
    (touching counts as interacting, matching the dissection tie-break),
    and enumerates assignments in [0, y_range_bound]. The input assignment
    is always feasible, so the search cannot come up empty.
    """
    report = validate(drawing)
    if not report.ok:
        raise ValueError(f"invalid drawing: {report.violations[0].message}")

    points: dict[tuple, Point] = {}
    for vid, p in drawing.vertices.items():
        points[_point_key("v", vid)] = p
    for e in drawing.edges:
        for i, b in enumerate(e.bends):
            points[_point_key("b", e.id, i)] = b

    levels = {p.y for p in points.values()}
    if len(levels) > 8:
        raise OracleRefusal(
            f"{len(levels)} distinct y-coordinates exceed the oracle limit of 8"
        )
    if y_range_bound is None:
        y_range_bound = max(levels) - min(levels) if levels else 0

    # Rigid components: endpoints of a horizontal segment share their y.
    parent: dict[tuple, tuple] = {k: k for k in points}

    def find(k: tuple) -> tuple:
        while parent[k] != k:
            parent[k] = parent[parent[k]]
            k = parent[k]
        return k

    def union(a: tuple, b: tuple) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    verticals: list[tuple[tuple, tuple, int]] = []  # (bottom key, top key, x)
    horizontals: list[tuple[tuple, int, int]] = []  # (key, x1, x2)
    for e in drawing.edges:
        pts = drawing.polyline(e)
        keys = (
            [_point_key("v", e.u)]
            + [_point_key("b", e.id, i) for i in range(len(e.bends))]
            + [_point_key("v", e.v)]
        )
        for i in range(len(pts) - 1):
            a, b = pts[i], pts[i + 1]
            ka, kb = keys[i], keys[i + 1]
            if a.y == b.y:
                union(ka, kb)
                horizontals.append((ka, min(a.x, b.x), max(a.x, b.x)))
            else:
                bottom, top = (ka, kb) if a.y < b.y else (kb, ka)
                verticals.append((bottom, top, a.x))

    comp_of = {k: find(k) for k in points}
    comp_level = {}
    for k, c in comp_of.items():
        comp_level.setdefault(c, points[k].y)
        if comp_level[c] != points[k].y:
            raise AssertionError("rigid component spans two input levels")

    # Items that occupy column ranges, for pairwise separation constraints.
    h_items = [
        (comp_of[k], x1, x2) for k, x1, x2 in horizontals
    ] + [(comp_of[k], points[k].x, points[k].x) for k in points]
    v_items = [
        (comp_of[kb], comp_of[kt], points[kb].y, points[kt].y, x)
        for kb, kt, x in verticals
    ]

    successors: dict[tuple, set[tuple]] = {}

    def order(c_low: tuple, c_high: tuple) -> None:
        if c_low != c_high:
            successors.setdefault(c_low, set()).add(c_high)

    for i, (c1, a1, b1) in enumerate(h_items):
        for c2, a2, b2 in h_items[i + 1 :]:
            if c1 == c2 or max(a1, a2) > min(b1, b2):
                continue
            if comp_level[c1] < comp_level[c2]:
                order(c1, c2)
            elif comp_level[c2] < comp_level[c1]:
                order(c2, c1)
    for cb, ct, yb, yt, x in v_items:
        order(cb, ct)  # shape: the segment keeps direction and length >= 1
        for c, a, b in h_items:
            if c in (cb, ct) or not (a <= x <= b):
                continue
            if comp_level[c] < yb:
                order(c, cb)
            elif comp_level[c] > yt:
                order(ct, c)
            else:
                raise AssertionError("element touches a vertical segment")
    for i, (cb1, ct1, yb1, yt1, x1) in enumerate(v_items):
        for cb2, ct2, yb2, yt2, x2 in v_items[i + 1 :]:
            if x1 != x2:
                continue
            if yb2 >= yt1:
                if ct1 != cb2:
                    order(ct1, cb2)
            elif yb1 >= yt2:
                if ct2 != cb1:
                    order(ct2, cb1)
            # overlapping spans in one column cannot occur in a valid drawing

    comps = sorted(set(comp_of.values()), key=lambda c: (comp_level[c], c))
    if len(comps) > 24:
        raise OracleRefusal(f"{len(comps)} rigid components exceed the oracle limit")

    preds: dict[tuple, list[tuple]] = {c: [] for c in comps}
    for c_low, highs in successors.items():
        for c_high in highs:
            preds[c_high].append(c_low)

    # Net objective weight: positive means this component prefers to sit low.
    weight = {c: 0 for c in comps}
    seg_terms: list[tuple[tuple, tuple]] = []
    for cb, ct, *_ in v_items:
        weight[ct] += 1
        weight[cb] -= 1
        seg_terms.append((cb, ct))

    order_index = {c: i for i, c in enumerate(comps)}
    best: dict[str, int | dict] = {"cost": None, "assign": None}
    assign: dict[tuple, int] = {}

    def lower_bound_rest(next_i: int, partial: int) -> int:
        # every not-yet-closed segment term contributes at least one unit
        pending = sum(
            1
            for cb, ct in seg_terms
            if order_index[ct] >= next_i
        )
        return partial + pending

    def partial_cost_after(c: tuple, y: int, partial: int) -> int:
        for cb, ct in seg_terms:
            if ct == c:
                partial += y - assign[cb]
        return partial

    def dfs(i: int, partial: int) -> None:
        if best["cost"] is not None and lower_bound_rest(i, partial) >= best["cost"]:
            return
        if i == len(comps):
            if best["cost"] is None or partial < best["cost"]:
                best["cost"] = partial
                best["assign"] = dict(assign)
            return
        c = comps[i]
        lo = 0
        for p in preds[c]:
            lo = max(lo, assign[p] + 1)
        if lo > y_range_bound:
            return
        if weight[c] >= 0:
            # Sitting as low as possible never hurts the objective and only
            # loosens successors, so no branching is needed.
            candidates = [lo]
        else:
            candidates = range(y_range_bound, lo - 1, -1)
        for y in candidates:
            assign[c] = y
            dfs(i + 1, partial_cost_after(c, y, partial))
            del assign[c]

    dfs(0, 0)
    if best["cost"] is None:
        raise AssertionError("oracle found no feasible assignment")

    final = best["assign"]
    witness = _apply_levels(drawing, {k: final[comp_of[k]] for k in points})
    wreport = validate(witness)
    if not wreport.ok:
        raise AssertionError(
            f"oracle witness is invalid: {wreport.violations[0].message}"
        )
    return OracleResult(int(best["cost"]), witness)


def _apply_levels(drawing: OrthoDrawing, new_y: dict[tuple, int]) -> OrthoDrawing:
    vertices = {
        vid: Point(p.x, new_y[("v", vid)]) for vid, p in drawing.vertices.items()
    }
    edges = []
    for e in drawing.edges:
        bends = tuple(
            Point(b.x, new_y[("b", e.id, i)]) for i, b in enumerate(e.bends)
        )
        edges.append(Edge(e.id, e.u, e.v, bends))
    return OrthoDrawing(vertices, edges)


# ---------------------------------------------------------------------------
# circulation oracle


def oracle_circulation(net: FlowNetwork, value_cap: int = 6) -> int:
    """Minimal circulation cost by exhaustive enumeration of arc values.

    Every arc value ranges over [lower, min(upper, value_cap)]; assignments
    violating conservation are pruned early. Exact on anything it accepts.
    """
    if len(net.arcs) > 12:
        raise OracleRefusal("more than 12 arcs")
    if value_cap > 6:
        raise OracleRefusal("value cap above 6")
    if sum(net.demands) != 0:
        raise FlowInfeasibleError("demands do not sum to zero")

    n = net.node_count
    arcs = net.arcs
    ranges = []
    for a in arcs:
        hi = value_cap if a.upper is None else min(a.upper, value_cap)
        if hi < a.lower:
            raise FlowInfeasibleError("arc range empty under the value cap")
        ranges.append((a.lower, hi))

    # Remaining slack per node if all later arcs swing to their extremes.
    suffix_out_max = [[0] * n for _ in range(len(arcs) + 1)]
    suffix_in_max = [[0] * n for _ in range(len(arcs) + 1)]
    for i in range(len(arcs) - 1, -1, -1):
        a = arcs[i]
        lo, hi = ranges[i]
        for k in range(n):
            suffix_out_max[i][k] = suffix_out_max[i + 1][k]
            suffix_in_max[i][k] = suffix_in_max[i + 1][k]
        suffix_out_max[i][a.tail] += hi - 0
        suffix_in_max[i][a.head] += hi - 0

    best: list[int | None] = [None]
    net_out = [0] * n

    def feasible_so_far(i: int) -> bool:
        for k in range(n):
            lo_possible = net_out[k] - suffix_in_max[i][k]
            hi_possible = net_out[k] + suffix_out_max[i][k]
            # later arcs also carry at least their lower bounds
            if not (lo_possible <= net.demands[k] <= hi_possible):
                return False
        return True

    def dfs(i: int, cost: int) -> None:
        if best[0] is not None and cost >= best[0]:
            return
        if i == len(arcs):
            if all(net_out[k] == net.demands[k] for k in range(n)):
                best[0] = cost
            return
        if not feasible_so_far(i):
            return
        a = arcs[i]
        lo, hi = ranges[i]
        for x in range(lo, hi + 1):
            net_out[a.tail] += x
            net_out[a.head] -= x
            dfs(i + 1, cost + x * a.cost)
            net_out[a.tail] -= x
            net_out[a.head] += x

    dfs(0, 0)
    if best[0] is None:
        raise FlowInfeasibleError("no feasible circulation within the cap")
    return best[0]
