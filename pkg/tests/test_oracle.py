import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

from convergecast.bounds import lb1, lb2, lb3
from convergecast.errors import (CyclicDependency, InvalidPlan, LimitsExceeded,
                                 PackingTooLarge)
from convergecast.graph_core import Instance, validate_instance
from convergecast.errors import DisconnectedGraph
from convergecast.instance_gen import gen_grid, gen_line, gen_random_connected, gen_random_tree
from convergecast.oracle import (OracleLimits, RoutingPlan, acyclic_plan, min_bins, pack_exact,
                                 plan_cost, plan_to_trace, random_plan, simple_paths,
                                 solve_exact, solve_exact_detailed, spt_plan)
from convergecast.graph_core import build_spt
from convergecast.routing import run_spt, validate_trace

from reference import brute_force_optimum, brute_min_bins


def star(n, k):
    return Instance.build(n, [(0, v) for v in range(1, n + 1)], k)


def cycle4(k=2):
    return Instance.build(3, [(0, 1), (1, 2), (2, 3), (3, 0)], k)


# -- packing --------------------------------------------------------------------

def test_pack_examples():
    assert min_bins([2, 2, 2], 3) == 3
    assert min_bins([1, 2, 3], 3) == 2
    assert min_bins([5], 5) == 1
    assert min_bins([], 4) == 0


def test_pack_limits():
    with pytest.raises(PackingTooLarge):
        pack_exact([1] * 17, 3)
    with pytest.raises(PackingTooLarge):
        pack_exact([4], 3)


@given(st.integers(1, 6).flatmap(
    lambda k: st.tuples(st.just(k), st.lists(st.integers(1, k), max_size=7))))
def test_pack_matches_brute_force(case):
    k, sizes = case
    bins = pack_exact(sizes, k)
    assert sorted(i for b in bins for i in b) == list(range(len(sizes)))
    assert all(sum(sizes[i] for i in b) <= k for b in bins)
    assert len(bins) == brute_min_bins(sizes, k)


# -- plans ------------------------------------------------------------------------

def test_plan_costs():
    line = gen_line(5, 2)
    plan = RoutingPlan({v: tuple(range(v, -1, -1)) for v in line.vertices})
    assert plan_cost(line, plan) == 9
    assert plan_cost(star(3, 2), spt_plan(star(3, 2), build_spt(star(3, 2)).parent)) == 3
    via_a = RoutingPlan({1: (1, 0), 2: (2, 1, 0), 3: (3, 0)})
    assert plan_cost(cycle4(), via_a) == 3


def test_check_plan_rejects():
    with pytest.raises(InvalidPlan):
        plan_cost(cycle4(), RoutingPlan({1: (1, 0), 2: (2, 0), 3: (3, 0)}))
    with pytest.raises(InvalidPlan):
        plan_cost(cycle4(), RoutingPlan({1: (1, 0), 3: (3, 0)}))
    with pytest.raises(InvalidPlan):
        plan_cost(cycle4(), RoutingPlan({1: (1, 2, 1, 0), 2: (2, 1, 0), 3: (3, 0)}))


def test_simple_paths_order():
    paths = simple_paths(cycle4(), 2)
    assert paths == [(2, 1, 0), (2, 3, 0)]
    assert simple_paths(cycle4(), 1) == [(1, 0), (1, 2, 3, 0)]


# -- solve_exact ------------------------------------------------------------------

def test_solve_examples():
    assert solve_exact(gen_line(5, 2))[0] == 9
    assert solve_exact(star(3, 2))[0] == 3
    assert solve_exact(gen_grid(2, 2, 2))[0] == 3
    assert solve_exact(cycle4())[0] == 3
    assert solve_exact(Instance.build(0, [], 2))[0] == 0


def test_witness_of_grid_is_a_valid_trace():
    inst = gen_grid(2, 2, 2)
    opt, plan = solve_exact(inst)
    assert validate_trace(inst, plan_to_trace(inst, plan)).total_hops == opt == 3


def test_limits():
    with pytest.raises(LimitsExceeded):
        solve_exact(gen_line(13, 2))
    with pytest.raises(LimitsExceeded):
        solve_exact(gen_line(5, 2), OracleLimits(max_vertices=4))


def test_limits_from_env(monkeypatch):
    monkeypatch.setenv("CONVERGECAST_MAX_ORACLE_VERTICES", "3")
    assert OracleLimits.from_env().max_vertices == 3
    with pytest.raises(LimitsExceeded):
        solve_exact(gen_line(4, 2))
    monkeypatch.delenv("CONVERGECAST_MAX_ORACLE_VERTICES")
    assert OracleLimits.from_env().max_vertices == 12


def _connected_graphs(vertex_count):
    pairs = list(itertools.combinations(range(vertex_count), 2))
    for mask in range(1 << len(pairs)):
        edges = [p for i, p in enumerate(pairs) if mask >> i & 1]
        try:
            yield validate_instance(Instance.build(vertex_count - 1, edges, 2))
        except DisconnectedGraph:
            continue


@pytest.mark.parametrize("vertex_count", [2, 3, 4, 5])
def test_matches_brute_force_exhaustively(vertex_count):
    for inst in _connected_graphs(vertex_count):
        for k in (2, 3):
            inst_k = Instance.build(inst.n, inst.graph.edges, k)
            assert solve_exact(inst_k)[0] == brute_force_optimum(inst_k)


def test_matches_brute_force_on_six_vertices():
    # dense six-vertex graphs are out of reach for the unpruned enumerator
    graphs = [g for g in _connected_graphs(6) if len(g.graph.edges) <= 8]
    rng = random.Random(6)
    for inst in rng.sample(graphs, 60):
        for k in (2, 3):
            inst_k = Instance.build(inst.n, inst.graph.edges, k)
            assert solve_exact(inst_k)[0] == brute_force_optimum(inst_k)


@settings(max_examples=40)
@given(st.integers(1, 5), st.floats(0, 1), st.integers(2, 4), st.integers(0, 10**6), st.data())
def test_ccp_matches_brute_force(n, density, k, seed, data):
    base = gen_random_connected(n, density, k, seed)
    sizes = data.draw(st.lists(st.integers(1, k), min_size=n, max_size=n))
    inst = Instance.build(n, base.graph.edges, k, sizes)
    opt, plan = solve_exact(inst)
    assert opt == brute_force_optimum(inst) == plan_cost(inst, plan)


@settings(max_examples=80)
@given(st.integers(1, 9), st.floats(0, 0.6), st.integers(2, 4), st.integers(0, 10**6))
def test_oracle_sound_and_sandwiched(n, density, k, seed):
    inst = gen_random_connected(n, density, k, seed)
    result = solve_exact_detailed(inst)
    spt = len(run_spt(inst))
    trace = plan_to_trace(inst, result.witness)
    assert validate_trace(inst, trace).total_hops == result.optimum
    assert max(lb1(inst), lb2(inst), lb3(inst)) <= result.optimum <= spt
    assert 2 * k * spt <= (4 * k - 3) * result.optimum


@given(st.integers(1, 12), st.integers(1, 4), st.integers(0, 10**6))
def test_trees_are_solved_by_spt(n, k, seed):
    inst = gen_random_tree(n, k, seed)
    assert solve_exact(inst)[0] == len(run_spt(inst))


# -- plan_to_trace ----------------------------------------------------------------

@given(st.integers(1, 10), st.floats(0, 0.6), st.integers(1, 4), st.integers(0, 10**6))
def test_spt_plan_trace_matches_router(n, density, k, seed):
    inst = gen_random_connected(n, density, k, seed)
    tree = build_spt(inst)
    via_plan = plan_to_trace(inst, spt_plan(inst, tree.parent))
    direct = run_spt(inst, tree)

    def per_edge(trace):
        return sorted((h.src, h.dst, h.load) for h in trace.hops)
    assert per_edge(via_plan) == per_edge(direct)


def test_crossing_plan_on_four_cycle_schedules():
    inst = cycle4()
    plan = RoutingPlan({1: (1, 2, 3, 0), 2: (2, 1, 0), 3: (3, 2, 1, 0)})
    m = validate_trace(inst, plan_to_trace(inst, plan))
    assert m.total_hops == plan_cost(inst, plan)


def test_cyclic_dependency_detected():
    inst = Instance.build(4, [(0, 1), (0, 3), (1, 2), (2, 3), (3, 4), (4, 1)], 2)
    plan = RoutingPlan({1: (1, 0), 2: (2, 3, 4, 1, 0), 3: (3, 0), 4: (4, 1, 2, 3, 0)})
    with pytest.raises(CyclicDependency):
        plan_to_trace(inst, plan)
    fixed = acyclic_plan(inst, plan)
    assert plan_cost(inst, fixed) <= plan_cost(inst, plan)
    validate_trace(inst, plan_to_trace(inst, fixed))


@given(st.integers(1, 8), st.floats(0, 0.7), st.integers(1, 4), st.integers(0, 10**6))
def test_acyclic_plan_never_costs_more(n, density, k, seed):
    inst = gen_random_connected(n, density, k, seed)
    plan = random_plan(inst, seed)
    fixed = acyclic_plan(inst, plan)
    assert plan_cost(inst, fixed) <= plan_cost(inst, plan)
    validate_trace(inst, plan_to_trace(inst, fixed))


@settings(max_examples=80)
@given(st.integers(1, 8), st.floats(0, 0.6), st.integers(2, 4), st.integers(0, 10**6))
def test_partial_and_full_hops_against_optimum(n, density, k, seed):
    # spt's full/partial split is dominated by any oracle-realized trace's split
    inst = gen_random_connected(n, density, k, seed)
    _, plan = solve_exact(inst)
    opt = validate_trace(inst, plan_to_trace(inst, plan))
    spt = validate_trace(inst, run_spt(inst))
    assert spt.partial_hops + k * spt.full_hops <= (k - 1) * opt.partial_hops + k * opt.full_hops
