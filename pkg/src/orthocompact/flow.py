"""Exact integer minimum-cost circulation with arc lower bounds.

Lower bounds are removed by the usual demand transformation, then the
residual problem is solved with successive shortest augmenting paths from a
super source. All arithmetic is integer; tie-breaking is fixed so identical
networks always produce identical flows.
"""

from __future__ import annotations

import heapq
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable


class FlowInfeasibleError(Exception):
    """No flow satisfies the bounds and demands."""


@dataclass(frozen=True)
class Arc:
    tail: int
    head: int
    lower: int = 0
    upper: int | None = None  # None means unbounded
    cost: int = 0


@dataclass
class FlowNetwork:
    """Nodes with demands and arcs with bounds and non-negative costs.

    A demand b(n) is the required net outflow of node n; demands must sum
    to zero.
    """

    demands: list[int] = field(default_factory=list)
    arcs: list[Arc] = field(default_factory=list)

    def add_node(self, demand: int = 0) -> int:
        self.demands.append(demand)
        return len(self.demands) - 1

    def add_arc(
        self,
        tail: int,
        head: int,
        lower: int = 0,
        upper: int | None = None,
        cost: int = 0,
    ) -> int:
        if lower < 0:
            raise ValueError("lower bound must be non-negative")
        if upper is not None and upper < lower:
            raise ValueError("upper bound below lower bound")
        if cost < 0:
            raise ValueError("costs must be non-negative")
        if not (0 <= tail < len(self.demands) and 0 <= head < len(self.demands)):
            raise ValueError("arc endpoint out of range")
        self.arcs.append(Arc(tail, head, lower, upper, cost))
        return len(self.arcs) - 1

    @property
    def node_count(self) -> int:
        return len(self.demands)

    def dump(self) -> str:
        """Line-oriented debug form: `N <id> <b>` and `A <tail> <head> <l> <u> <c>`."""
        lines = [f"N {i} {b}" for i, b in enumerate(self.demands)]
        for a in self.arcs:
            u = "inf" if a.upper is None else str(a.upper)
            lines.append(f"A {a.tail} {a.head} {a.lower} {u} {a.cost}")
        return "\n".join(lines) + "\n"

    @classmethod
    def parse(cls, text: str) -> FlowNetwork:
        net = cls()
        demands: dict[int, int] = {}
        arcs: list[tuple[int, int, int, int | None, int]] = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            fields = line.split()
            if fields[0] == "N" and len(fields) == 3:
                demands[int(fields[1])] = int(fields[2])
            elif fields[0] == "A" and len(fields) == 6:
                upper = None if fields[4] == "inf" else int(fields[4])
                arcs.append(
                    (int(fields[1]), int(fields[2]), int(fields[3]), upper, int(fields[5]))
                )
            else:
                raise ValueError(f"line {lineno}: unrecognized record {raw!r}")
        for i in range(len(demands)):
            if i not in demands:
                raise ValueError(f"missing node {i}")
            net.add_node(demands[i])
        for tail, head, lower, upper, cost in arcs:
            net.add_arc(tail, head, lower, upper, cost)
        return net


@dataclass(frozen=True)
class Flow:
    values: tuple[int, ...]
    total_cost: int


def _finite_cap(net: FlowNetwork) -> int:
    """A finite bound that some optimal solution never exceeds on any arc."""
    return sum(a.lower for a in net.arcs) + sum(abs(b) for b in net.demands) + 1


def solve_min_cost(net: FlowNetwork) -> Flow:
    """Minimum-cost integer flow meeting all bounds and demands.

    Deterministic: shortest-path ties prefer the lowest node index and arcs
    are scanned in insertion order. Raises FlowInfeasibleError if the
    demands cannot be met.
    """
    if sum(net.demands) != 0:
        raise FlowInfeasibleError("demands do not sum to zero")

    n = net.node_count
    cap_default = _finite_cap(net)

    # Demand transformation: substituting x = x' + l turns the lower bounds
    # into residual demands b'(k) = b(k) - sum(l out of k) + sum(l into k).
    residual_demand = list(net.demands)
    for a in net.arcs:
        residual_demand[a.tail] -= a.lower
        residual_demand[a.head] += a.lower

    source, sink = n, n + 1
    # Forward-star residual arrays; each arc also gets a reverse slot.
    tails: list[int] = []
    heads: list[int] = []
    caps: list[int] = []
    costs: list[int] = []
    adj: list[list[int]] = [[] for _ in range(n + 2)]

    def push_arc(t: int, h: int, c: int, w: int) -> int:
        idx = len(tails)
        tails.extend((t, h))
        heads.extend((h, t))
        caps.extend((c, 0))
        costs.extend((w, -w))
        adj[t].append(idx)
        adj[h].append(idx + 1)
        return idx

    arc_slot: list[int] = []
    for a in net.arcs:
        residual = (a.upper - a.lower) if a.upper is not None else cap_default
        arc_slot.append(push_arc(a.tail, a.head, residual, a.cost))

    supply_total = 0
    for k in range(n):
        # A node with positive residual demand must push out more than it
        # receives; the surplus is injected from the super source.
        if residual_demand[k] > 0:
            push_arc(source, k, residual_demand[k], 0)
            supply_total += residual_demand[k]
        elif residual_demand[k] < 0:
            push_arc(k, sink, -residual_demand[k], 0)

    INF = float("inf")
    potential = [0] * (n + 2)
    shipped = 0
    while shipped < supply_total:
        dist: list[float] = [INF] * (n + 2)
        prev_arc = [-1] * (n + 2)
        dist[source] = 0
        heap: list[tuple[int, int]] = [(0, source)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for idx in adj[u]:
                if caps[idx] <= 0:
                    continue
                v = heads[idx]
                nd = d + costs[idx] + potential[u] - potential[v]
                if nd < dist[v]:
                    dist[v] = nd
                    prev_arc[v] = idx
                    heapq.heappush(heap, (nd, v))
        if dist[sink] == INF:
            raise FlowInfeasibleError("demands cannot be satisfied")
        for k in range(n + 2):
            if dist[k] < INF:
                potential[k] += int(dist[k])
        bottleneck = supply_total - shipped
        v = sink
        while v != source:
            idx = prev_arc[v]
            bottleneck = min(bottleneck, caps[idx])
            v = tails[idx]
        v = sink
        while v != source:
            idx = prev_arc[v]
            caps[idx] -= bottleneck
            caps[idx ^ 1] += bottleneck
            v = tails[idx]
        shipped += bottleneck

    values = []
    for a, slot in zip(net.arcs, arc_slot):
        sent = caps[slot ^ 1]  # reverse capacity equals flow pushed forward
        values.append(sent + a.lower)
    total = sum(x * a.cost for x, a in zip(values, net.arcs))
    return Flow(tuple(values), total)


def check_flow(net: FlowNetwork, flow: Flow) -> bool:
    """True iff capacity constraints and flow conservation hold exactly."""
    if len(flow.values) != len(net.arcs):
        return False
    for a, x in zip(net.arcs, flow.values):
        if x < a.lower or (a.upper is not None and x > a.upper):
            return False
    net_out = [0] * net.node_count
    for a, x in zip(net.arcs, flow.values):
        net_out[a.tail] += x
        net_out[a.head] -= x
    if any(net_out[k] != net.demands[k] for k in range(net.node_count)):
        return False
    return flow.total_cost == sum(x * a.cost for x, a in zip(flow.values, net.arcs))


def certify_optimal(net: FlowNetwork, flow: Flow) -> bool:
    """True iff the residual network has no negative-cost cycle.

    A feasible circulation is optimal exactly when no such cycle exists;
    detection is a queue-based label-correcting pass started from every node.
    """
    if not check_flow(net, flow):
        raise ValueError("flow is not feasible for this network")
    n = net.node_count
    residual: list[tuple[int, int, int]] = []  # (tail, head, cost)
    for a, x in zip(net.arcs, flow.values):
        if a.upper is None or x < a.upper:
            residual.append((a.tail, a.head, a.cost))
        if x > a.lower:
            residual.append((a.head, a.tail, -a.cost))

    out: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for t, h, c in residual:
        out[t].append((h, c))

    dist = [0] * n
    in_queue = [True] * n
    relax_count = [0] * n
    queue = deque(range(n))
    while queue:
        u = queue.popleft()
        in_queue[u] = False
        for v, c in out[u]:
            if dist[u] + c < dist[v]:
                dist[v] = dist[u] + c
                relax_count[v] += 1
                if relax_count[v] > n:
                    return False  # negative cycle reached v
                if not in_queue[v]:
                    in_queue[v] = True
                    queue.append(v)
    return True


def feasible_flow_from_values(net: FlowNetwork, values: Iterable[int]) -> Flow:
    """Package raw arc values as a Flow with the implied total cost."""
    vals = tuple(values)
    total = sum(x * a.cost for x, a in zip(vals, net.arcs))
    return Flow(vals, total)
