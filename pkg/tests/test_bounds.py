from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from convergecast.bounds import (bound_report, cut_loads, grid_lb, lb1, lb2, lb3, partial_lb,
                                 raw_bounds)
from convergecast.graph_core import Instance
from convergecast.instance_gen import gen_grid, gen_line, gen_random_connected, gen_random_tree
from convergecast.routing import run_spt, validate_trace


def star(n, k):
    return Instance.build(n, [(0, v) for v in range(1, n + 1)], k)


def test_lb1():
    assert lb1(gen_line(1, 2)) == 1
    assert lb1(gen_grid(8, 8, 4)) == 63
    assert lb1(gen_line(5, 2)) == 5


def test_lb2():
    assert lb2(gen_line(5, 2)) == 8
    assert lb2(gen_line(5, 2), raw=True) == Fraction(15, 2)
    assert lb2(star(7, 3)) == 3
    assert lb2(gen_grid(2, 2, 2)) == 2


def test_lb3():
    line = gen_line(5, 2)
    assert cut_loads(line) == [5, 4, 3, 2, 1]
    assert lb3(line) == 9
    assert lb3(star(4, 4)) == 1
    assert lb3(star(4, 9)) == 1


def test_grid_lb():
    assert grid_lb(2, 2, 2) == 2
    assert grid_lb(8, 8, 4) == 112
    assert grid_lb(8, 8, 4, raw=True) == 112
    for n, k in [(5, 2), (6, 3), (9, 4)]:
        assert grid_lb(1, n, k) == lb2(gen_line(n - 1, k))


def test_partial_lb():
    assert partial_lb(gen_line(1, 2)) == 1
    assert partial_lb(gen_line(5, 2)) == 3


def test_report_and_raw():
    rep = bound_report(gen_grid(4, 4, 3))
    assert rep.grid_lb == grid_lb(4, 4, 3)
    assert rep.best == max(rep.lb1, rep.lb2, rep.lb3, rep.grid_lb, rep.partial_lb)
    # a line is a degenerate 1 x (n+1) grid
    assert bound_report(gen_line(5, 2)).grid_lb == lb2(gen_line(5, 2))
    assert bound_report(star(4, 2)).grid_lb is None
    raw = raw_bounds(gen_line(5, 2))
    assert raw["lb3"] == Fraction(15, 2) and raw["grid_lb"] == Fraction(15, 2)


def test_ccp_sizes_weight_bounds():
    inst = gen_line(3, 3, sizes=[3, 2, 1])
    assert lb2(inst) == -(-(3 * 1 + 2 * 2 + 1 * 3) // 3)
    assert cut_loads(inst) == [6, 3, 1]


@given(st.integers(1, 12), st.integers(1, 5), st.integers(0, 10**6))
def test_lb3_tight_on_trees(n, k, seed):
    inst = gen_random_tree(n, k, seed)
    total = validate_trace(inst, run_spt(inst)).total_hops
    assert lb3(inst) <= total


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 13) for k in (1, 2, 3, 4)])
def test_lb3_equals_spt_on_lines(n, k):
    inst = gen_line(n, k)
    assert lb3(inst) == len(run_spt(inst))


@given(st.integers(1, 30), st.floats(0, 1), st.integers(1, 6), st.integers(0, 10**6))
def test_bounds_ordered(n, density, k, seed):
    inst = gen_random_connected(n, density, k, seed)
    assert lb3(inst) >= lb2(inst)
    assert lb3(inst, raw=True) == lb2(inst, raw=True)
    assert max(lb1(inst), lb2(inst), lb3(inst)) <= len(run_spt(inst))
