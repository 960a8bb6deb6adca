"""Exact optimum hop counts on small instances.

A routing plan gives every reading a simple path to the sink. With
unbounded buffering a vertex can hold traffic until everything bound for
an edge has arrived, so a plan costs the sum over directed edges of the
fewest packets that carry that edge's readings: ``ceil(x / k)`` for x unit
readings, or an exact bin packing for arbitrary sizes. Restricting to
simple paths loses nothing: cutting a cycle out of a walk never raises any
edge's load, and the per-edge cost is monotone in the load.
"""
from __future__ import annotations

import os
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Mapping, Sequence

from .errors import CyclicDependency, InvalidPlan, LimitsExceeded, PackingTooLarge
from .graph_core import SINK, Instance, ParentPolicy, build_spt
from .routing import HopTrace, PacketHop, Reading

MAX_PACKING_ITEMS = 16
ENV_MAX_VERTICES = "CONVERGECAST_MAX_ORACLE_VERTICES"


@dataclass(frozen=True)
class OracleLimits:
    max_vertices: int = 12
    max_paths_per_vertex: int = 10_000

    @classmethod
    def from_env(cls) -> "OracleLimits":
        raw = os.environ.get(ENV_MAX_VERTICES)
        return cls(max_vertices=int(raw)) if raw else cls()


@dataclass(frozen=True)
class RoutingPlan:
    paths: Mapping[int, tuple[int, ...]]

    def format(self) -> str:
        return "".join(f"p {v} " + " ".join(map(str, self.paths[v])) + "\n"
                       for v in sorted(self.paths))


def check_plan(instance: Instance, plan: RoutingPlan) -> None:
    if set(plan.paths) != set(instance.vertices):
        raise InvalidPlan("plan must route exactly the non-sink vertices")
    for v, path in plan.paths.items():
        if not path or path[0] != v or path[-1] != SINK:
            raise InvalidPlan(f"path of {v} must run from {v} to the sink")
        if len(set(path)) != len(path):
            raise InvalidPlan(f"path of {v} is not simple")
        for a, b in zip(path, path[1:]):
            if not instance.graph.has_edge(a, b):
                raise InvalidPlan(f"path of {v} uses non-edge ({a}, {b})")


def edge_loads(instance: Instance, plan: RoutingPlan) -> dict[tuple[int, int], list[Reading]]:
    """Readings crossing every directed edge, in origin order."""
    loads: dict[tuple[int, int], list[Reading]] = defaultdict(list)
    for v in sorted(plan.paths):
        path = plan.paths[v]
        for e in zip(path, path[1:]):
            loads[e].append(Reading(v, instance.sizes[v]))
    return dict(loads)


# -- exact bin packing --------------------------------------------------------

def pack_exact(sizes: Sequence[int], k: int) -> list[list[int]]:
    """Minimum-cardinality packing of ``sizes`` into bins of capacity ``k``.

    Returns bins as lists of item indices. Branch and bound over item
    placements, largest item first, seeded with first-fit-decreasing.
    """
    if len(sizes) > MAX_PACKING_ITEMS:
        raise PackingTooLarge(f"{len(sizes)} items exceed the exact packing limit")
    if any(s > k or s < 1 for s in sizes):
        raise PackingTooLarge("item larger than the bin capacity")
    order = sorted(range(len(sizes)), key=lambda i: -sizes[i])
    best: list[list[int]] = []
    room: list[int] = []
    for i in order:
        for j, free in enumerate(room):
            if sizes[i] <= free:
                best[j].append(i)
                room[j] -= sizes[i]
                break
        else:
            best.append([i])
            room.append(k - sizes[i])
    lower = -(-sum(sizes) // k)
    if len(best) == lower:
        return best
    bins: list[list[int]] = []
    free: list[int] = []
    suffix = [0] * (len(order) + 1)
    for p in range(len(order) - 1, -1, -1):
        suffix[p] = suffix[p + 1] + sizes[order[p]]

    def place(p):
        nonlocal best
        if len(bins) >= len(best) or len(best) == lower:
            return
        if p == len(order):
            best = [list(b) for b in bins]
            return
        if len(bins) + -(-max(0, suffix[p] - sum(free)) // k) >= len(best):
            return
        i = order[p]
        tried = set()
        for j in range(len(bins)):
            if free[j] >= sizes[i] and free[j] not in tried:
                tried.add(free[j])
                bins[j].append(i)
                free[j] -= sizes[i]
                place(p + 1)
                free[j] += sizes[i]
                bins[j].pop()
        bins.append([i])
        free.append(k - sizes[i])
        place(p + 1)
        bins.pop()
        free.pop()

    place(0)
    return best


def min_bins(sizes: Sequence[int], k: int) -> int:
    return len(pack_exact(sizes, k)) if sizes else 0


# -- plan costs ---------------------------------------------------------------

def plan_cost_uccp(instance: Instance, plan: RoutingPlan) -> int:
    if not instance.is_uccp:
        raise InvalidPlan("unit-reading cost applied to a CCP instance")
    check_plan(instance, plan)
    k = instance.k
    return sum(-(-len(rs) // k) for rs in edge_loads(instance, plan).values())


def plan_cost_ccp(instance: Instance, plan: RoutingPlan) -> int:
    check_plan(instance, plan)
    return sum(min_bins([r.size for r in rs], instance.k)
               for rs in edge_loads(instance, plan).values())


def plan_cost(instance: Instance, plan: RoutingPlan) -> int:
    return plan_cost_uccp(instance, plan) if instance.is_uccp else plan_cost_ccp(instance, plan)


# -- path enumeration ---------------------------------------------------------

def simple_paths(instance: Instance, v: int, limit: int | None = None) -> list[tuple[int, ...]]:
    """All simple paths from ``v`` to the sink, shortest first then lexicographic."""
    adj = instance.adjacency
    found: list[tuple[int, ...]] = []
    path = [v]
    on_path = {v}

    def walk(u):
        for w in adj[u]:
            if w == SINK:
                found.append(tuple(path) + (SINK,))
                if limit is not None and len(found) > limit:
                    raise LimitsExceeded(f"vertex {v} has more than {limit} simple paths")
            elif w not in on_path:
                on_path.add(w)
                path.append(w)
                walk(w)
                path.pop()
                on_path.discard(w)

    walk(v)
    found.sort(key=lambda p: (len(p), p))
    return found


def spt_plan(instance: Instance, parent: Sequence[int]) -> RoutingPlan:
    paths = {}
    for v in instance.vertices:
        path = [v]
        while path[-1] != SINK:
            path.append(parent[path[-1]])
        paths[v] = tuple(path)
    return RoutingPlan(paths)


# -- branch and bound ---------------------------------------------------------

class _Search:
    """Depth-first search over per-reading path choices.

    Readings are assigned farthest first, paths shortest first. Every
    directed edge from distance i to i-1 lies on cut i, which all readings
    at distance >= i must cross; that, plus the rule that a vertex with an
    unrouted reading and no outgoing packet yet needs one more packet,
    gives the admissible bound used for pruning.
    """

    def __init__(self, instance: Instance, paths: dict[int, list[tuple[int, ...]]],
                 incumbent: int, witness: list[tuple[int, ...]]):
        self.inst = instance
        k = self.k = instance.k
        d = instance.distances
        self.depth = max(d)
        self.uccp = instance.is_uccp
        self.order = sorted(instance.vertices, key=lambda v: (-d[v], v))
        index: dict[tuple[int, int], int] = {}
        for v in self.order:
            for p in paths[v]:
                for e in zip(p, p[1:]):
                    index.setdefault(e, len(index))
        self.edges = list(index)
        self.tail = [u for u, _ in self.edges]
        self.level = [d[u] if d[w] == d[u] - 1 else 0 for u, w in self.edges]
        self.choices = [[tuple(index[e] for e in zip(p, p[1:])) for p in paths[v]]
                        for v in self.order]
        self.raw_paths = [paths[v] for v in self.order]
        self.size = [instance.sizes[v] for v in self.order]
        self.vlevel = [d[v] for v in self.order]
        n_r = len(self.order)
        # remaining bytes at distance >= i among readings order[pos:]
        self.rem = [[0] * (self.depth + 1) for _ in range(n_r + 1)]
        for pos in range(n_r - 1, -1, -1):
            row = list(self.rem[pos + 1])
            for i in range(1, self.vlevel[pos] + 1):
                row[i] += self.size[pos]
            self.rem[pos] = row
        # leaf twins: same single neighbour, so their path lists align by suffix
        self.twin_prev = [-1] * n_r
        last_for: dict[int, int] = {}
        adj = instance.adjacency
        for pos, v in enumerate(self.order):
            if len(adj[v]) == 1 and adj[v][0] != SINK:
                key = adj[v][0] * (instance.k + 1) + instance.sizes[v]
                if key in last_for:
                    self.twin_prev[pos] = last_for[key]
                last_for[key] = pos
        self.load = [0] * len(self.edges)
        self.items: list[list[int]] = [[] for _ in self.edges]
        self.pk = [0] * (self.depth + 1)
        self.slack = [0] * (self.depth + 1)
        self.out = [0] * instance.graph.vertex_count
        self.cost = 0
        self.pick = [0] * n_r
        self.best = incumbent
        self.best_pick = witness
        self.seen: set = set()
        self.nodes = 0

    def bound(self, pos: int) -> int:
        k = self.k
        rem = self.rem[pos]
        zero = [0] * (self.depth + 1)
        out = self.out
        for q in range(pos, len(self.order)):
            if out[self.order[q]] == 0:
                zero[self.vlevel[q]] += 1
        extra = 0
        for i in range(1, self.depth + 1):
            need = rem[i] - self.slack[i]
            extra += max(-(-need // k) if need > 0 else 0, zero[i])
        return self.cost + extra

    def apply(self, pos, path):
        k, s = self.k, self.size[pos]
        for e in path:
            before = self.load[e]
            after = before + s
            delta = -(-after // k) - -(-before // k)
            lvl = self.level[e]
            if delta:
                self.cost += delta
                self.out[self.tail[e]] += delta
                if lvl:
                    self.pk[lvl] += delta
            if lvl:
                self.slack[lvl] += delta * k - s
            self.load[e] = after
            self.items[e].append(s)

    def undo(self, pos, path):
        k, s = self.k, self.size[pos]
        for e in reversed(path):
            after = self.load[e]
            before = after - s
            delta = -(-after // k) - -(-before // k)
            lvl = self.level[e]
            if delta:
                self.cost -= delta
                self.out[self.tail[e]] -= delta
                if lvl:
                    self.pk[lvl] -= delta
            if lvl:
                self.slack[lvl] -= delta * k - s
            self.load[e] = before
            self.items[e].pop()

    def exact_cost(self) -> int:
        if self.uccp:
            return self.cost
        return sum(min_bins(items, self.k) for items in self.items if items)

    def run(self, pos: int = 0):
        self.nodes += 1
        if pos == len(self.order):
            c = self.exact_cost()
            if c < self.best:
                self.best = c
                self.best_pick = [self.raw_paths[q][self.pick[q]] for q in range(pos)]
            return
        start = self.pick[self.twin_prev[pos]] if self.twin_prev[pos] >= 0 else 0
        if self.uccp:
            key = (pos, start, tuple(self.load))
            if key in self.seen:
                return
            self.seen.add(key)
        for j in range(start, len(self.choices[pos])):
            path = self.choices[pos][j]
            self.pick[pos] = j
            self.apply(pos, path)
            if self.bound(pos + 1) < self.best:
                self.run(pos + 1)
            self.undo(pos, path)


@dataclass(frozen=True)
class OracleResult:
    optimum: int
    witness: RoutingPlan
    nodes: int


def solve_exact(instance: Instance, limits: OracleLimits | None = None) -> tuple[int, RoutingPlan]:
    result = solve_exact_detailed(instance, limits)
    return result.optimum, result.witness


def solve_exact_detailed(instance: Instance, limits: OracleLimits | None = None) -> OracleResult:
    limits = limits or OracleLimits.from_env()
    if instance.n > limits.max_vertices:
        raise LimitsExceeded(
            f"{instance.n} non-sink vertices exceed the oracle limit of {limits.max_vertices}")
    if instance.n == 0:
        return OracleResult(0, RoutingPlan({}), 0)
    paths = {v: simple_paths(instance, v, limits.max_paths_per_vertex) for v in instance.vertices}
    # incumbent: the cheapest of a few shortest-path-tree plans
    policies = [ParentPolicy.min_id(), ParentPolicy.max_id()] + \
        [ParentPolicy.random(s) for s in range(4)]
    best_plan, best_cost = None, None
    for pol in policies:
        plan = spt_plan(instance, build_spt(instance, pol).parent)
        c = plan_cost(instance, plan)
        if best_cost is None or c < best_cost:
            best_plan, best_cost = plan, c
    search = _Search(instance, paths, best_cost, None)
    if search.bound(0) < best_cost:
        search.run()
    if search.best_pick is not None:
        best_plan = RoutingPlan({p[0]: p for p in search.best_pick})
    if instance.is_uccp:
        best_plan = acyclic_plan(instance, best_plan)
    return OracleResult(search.best, best_plan, search.nodes)


# -- from plans to traces -----------------------------------------------------

def _find_cycle(flow: dict[tuple[int, int], int]) -> list[tuple[int, int]] | None:
    succ: dict[int, list[int]] = defaultdict(list)
    for (u, w), f in sorted(flow.items()):
        if f > 0:
            succ[u].append(w)
    color: dict[int, int] = {}
    stack_path: list[int] = []

    def visit(u):
        color[u] = 1
        stack_path.append(u)
        for w in succ[u]:
            if color.get(w) == 1:
                cyc = stack_path[stack_path.index(w):] + [w]
                return list(zip(cyc, cyc[1:]))
            if w not in color:
                found = visit(w)
                if found:
                    return found
        color[u] = 2
        stack_path.pop()
        return None

    for u in sorted(succ):
        if u not in color:
            found = visit(u)
            if found:
                return found
    return None


def acyclic_plan(instance: Instance, plan: RoutingPlan) -> RoutingPlan:
    """Equivalent-or-cheaper unit-reading plan whose edge support has no directed cycle.

    Cancels flow around directed cycles, then splits the remaining flow
    back into one path per reading in topological order.
    """
    flow: dict[tuple[int, int], int] = defaultdict(int)
    for path in plan.paths.values():
        for e in zip(path, path[1:]):
            flow[e] += 1
    while (cyc := _find_cycle(flow)) is not None:
        m = min(flow[e] for e in cyc)
        for e in cyc:
            flow[e] -= m
    out_edges: dict[int, list[tuple[int, int]]] = defaultdict(list)
    indeg: dict[int, int] = defaultdict(int)
    for (u, w), f in sorted(flow.items()):
        if f > 0:
            out_edges[u].append((w, f))
            indeg[w] += 1
    ready = sorted(v for v in range(instance.graph.vertex_count) if indeg[v] == 0)
    tokens: dict[int, list[list[int]]] = defaultdict(list)
    done: dict[int, tuple[int, ...]] = {}
    while ready:
        u = ready.pop(0)
        if u == SINK:
            continue
        pending = tokens.pop(u, []) + [[u]]
        for w, f in out_edges[u]:
            for _ in range(f):
                walk = pending.pop(0) + [w]
                if w == SINK:
                    done[walk[0]] = tuple(walk)
                else:
                    tokens[w].append(walk)
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
                ready.sort()
    result = RoutingPlan(done)
    check_plan(instance, result)
    return result


def edge_dependencies(plan: RoutingPlan) -> dict[tuple[int, int], set]:
    """Edge e precedes edge f when some reading crosses e and then f."""
    deps: dict[tuple[int, int], set] = defaultdict(set)
    for path in plan.paths.values():
        edges = list(zip(path, path[1:]))
        for e in edges:
            deps.setdefault(e, set())
        for e, f in zip(edges, edges[1:]):
            deps[e].add(f)
    return dict(deps)


def plan_to_trace(instance: Instance, plan: RoutingPlan) -> HopTrace:
    """Ship every edge's whole load at once, edges in dependency order."""
    check_plan(instance, plan)
    deps = edge_dependencies(plan)
    indeg = {e: 0 for e in deps}
    for e, succs in deps.items():
        for f in succs:
            indeg[f] += 1
    ready = sorted(e for e, c in indeg.items() if c == 0)
    order = []
    while ready:
        e = ready.pop(0)
        order.append(e)
        for f in sorted(deps[e]):
            indeg[f] -= 1
            if indeg[f] == 0:
                ready.append(f)
        ready.sort()
    if len(order) != len(deps):
        raise CyclicDependency("edge dependencies of the plan contain a cycle")
    loads = edge_loads(instance, plan)
    hops: list[PacketHop] = []
    k = instance.k
    for e in order:
        readings = loads[e]
        if instance.is_uccp:
            packets = [readings[i:i + k] for i in range(0, len(readings), k)]
        else:
            packets = [[readings[i] for i in sorted(b)]
                       for b in pack_exact([r.size for r in readings], k)]
        for pkt in packets:
            hops.append(PacketHop(len(hops), e[0], e[1], tuple(pkt)))
    return HopTrace(instance, tuple(hops))


def random_plan(instance: Instance, seed: int) -> RoutingPlan:
    """A random valid plan, for tests and stress runs."""
    rng = random.Random(seed)
    return RoutingPlan({v: rng.choice(simple_paths(instance, v)) for v in instance.vertices})
