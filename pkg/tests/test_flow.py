from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from orthocompact.flow import (
    Flow,
    FlowInfeasibleError,
    FlowNetwork,
    certify_optimal,
    check_flow,
    solve_min_cost,
)
from orthocompact.oracle import oracle_circulation


def two_node_cycle() -> FlowNetwork:
    net = FlowNetwork()
    a, b = net.add_node(0), net.add_node(0)
    net.add_arc(a, b, 1, None, 1)
    net.add_arc(b, a, 1, None, 1)
    return net


def random_network(rng: random.Random) -> FlowNetwork:
    net = FlowNetwork()
    n = rng.randint(2, 4)
    demands = [rng.randint(-2, 2) for _ in range(n - 1)]
    demands.append(-sum(demands))
    for b in demands:
        net.add_node(b)
    for _ in range(rng.randint(2, 7)):
        tail = rng.randrange(n)
        head = rng.randrange(n)
        lower = rng.randint(0, 2)
        upper = lower + rng.randint(0, 3)
        cost = rng.randint(0, 3)
        net.add_arc(tail, head, lower, upper, cost)
    return net


class TestSolve:
    def test_empty_network(self):
        net = FlowNetwork()
        net.add_node(0)
        flow = solve_min_cost(net)
        assert flow == Flow((), 0)

    def test_two_node_cycle_forced_to_lower_bounds(self):
        flow = solve_min_cost(two_node_cycle())
        assert flow.values == (1, 1)
        assert flow.total_cost == 2

    def test_self_loop_sits_at_lower_bound(self):
        net = FlowNetwork()
        a = net.add_node(0)
        net.add_arc(a, a, 2, None, 1)
        flow = solve_min_cost(net)
        assert flow.values == (2,)

    def test_prefers_cheap_parallel_arc(self):
        net = FlowNetwork()
        a, b = net.add_node(0), net.add_node(0)
        net.add_arc(a, b, 0, 3, 1)
        net.add_arc(a, b, 0, 3, 0)
        net.add_arc(b, a, 1, 1, 0)
        flow = solve_min_cost(net)
        assert flow.values == (0, 1, 1)
        assert flow.total_cost == 0

    def test_demands_must_balance(self):
        net = FlowNetwork()
        net.add_node(1)
        net.add_node(0)
        with pytest.raises(FlowInfeasibleError):
            solve_min_cost(net)

    def test_unsatisfiable_bounds(self):
        net = FlowNetwork()
        a, b = net.add_node(0), net.add_node(0)
        net.add_arc(a, b, 2, None, 1)  # nothing can flow back
        with pytest.raises(FlowInfeasibleError):
            solve_min_cost(net)

    def test_deterministic(self):
        rng = random.Random(42)
        nets = [random_network(rng) for _ in range(30)]
        for net in nets:
            try:
                first = solve_min_cost(net)
            except FlowInfeasibleError:
                continue
            again = solve_min_cost(
                FlowNetwork(list(net.demands), list(net.arcs))
            )
            assert first == again

    @pytest.mark.parametrize("seed", range(120))
    def test_matches_exhaustive_oracle(self, seed):
        net = random_network(random.Random(seed))
        try:
            got = solve_min_cost(net).total_cost
        except FlowInfeasibleError:
            got = None
        try:
            want = oracle_circulation(net)
        except FlowInfeasibleError:
            want = None
        assert got == want


class TestCheckFlow:
    def test_solver_output_is_feasible(self):
        net = two_node_cycle()
        assert check_flow(net, solve_min_cost(net))

    def test_below_lower_bound(self):
        net = two_node_cycle()
        assert not check_flow(net, Flow((0, 1), 1))

    def test_conservation_violated(self):
        net = two_node_cycle()
        assert not check_flow(net, Flow((2, 1), 3))

    def test_wrong_cost_rejected(self):
        net = two_node_cycle()
        assert not check_flow(net, Flow((1, 1), 3))


class TestCertifyOptimal:
    def test_optimal_flow_certifies(self):
        net = two_node_cycle()
        assert certify_optimal(net, solve_min_cost(net))

    def test_circulating_slack_is_a_negative_cycle(self):
        # pushing back one unit on each arc would save 2
        net = two_node_cycle()
        assert not certify_optimal(net, Flow((2, 2), 4))

    def test_requires_a_feasible_flow(self):
        net = two_node_cycle()
        with pytest.raises(ValueError):
            certify_optimal(net, Flow((0, 0), 0))

    @pytest.mark.parametrize("seed", range(60))
    def test_every_solver_output_certifies(self, seed):
        net = random_network(random.Random(1000 + seed))
        try:
            flow = solve_min_cost(net)
        except FlowInfeasibleError:
            return
        assert check_flow(net, flow)
        assert certify_optimal(net, flow)


class TestDump:
    def test_round_trip(self):
        net = two_node_cycle()
        net.add_arc(0, 1, 0, 5, 2)
        text = net.dump()
        back = FlowNetwork.parse(text)
        assert back.demands == net.demands
        assert back.arcs == net.arcs
        assert "inf" in text

    def test_rejects_garbage(self):
        with pytest.raises(ValueError):
            FlowNetwork.parse("N 0 0\nX 1 2\n")


@st.composite
def networks(draw):
    n = draw(st.integers(2, 4))
    demands = [draw(st.integers(-2, 2)) for _ in range(n - 1)]
    demands.append(-sum(demands))
    arcs = draw(
        st.lists(
            st.tuples(
                st.integers(0, n - 1),
                st.integers(0, n - 1),
                st.integers(0, 2),
                st.integers(0, 3),
                st.integers(0, 3),
            ),
            min_size=1,
            max_size=7,
        )
    )
    net = FlowNetwork()
    for b in demands:
        net.add_node(b)
    for tail, head, lower, extra, cost in arcs:
        net.add_arc(tail, head, lower, lower + extra, cost)
    return net


@settings(max_examples=150, deadline=None)
@given(networks())
def test_solver_output_always_feasible_and_optimal(net):
    try:
        flow = solve_min_cost(net)
    except FlowInfeasibleError:
        with pytest.raises(FlowInfeasibleError):
            oracle_circulation(net)
        return
    assert check_flow(net, flow)
    assert certify_optimal(net, flow)
    assert flow.total_cost == oracle_circulation(net)
