"""Slow, independent reference computations the package is checked against.

Nothing here imports the code paths it checks: distances come from
Floyd-Warshall, simple paths from networkx, packings from set-partition
enumeration.
"""
from itertools import combinations

import networkx as nx


def floyd_warshall_from_sink(instance):
    n = instance.graph.vertex_count
    inf = float("inf")
    dist = [[0 if i == j else inf for j in range(n)] for i in range(n)]
    for u, v in instance.graph.edges:
        dist[u][v] = dist[v][u] = 1
    for m in range(n):
        for i in range(n):
            for j in range(n):
                if dist[i][m] + dist[m][j] < dist[i][j]:
                    dist[i][j] = dist[i][m] + dist[m][j]
    return [dist[0][v] for v in range(n)]


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def brute_min_bins(sizes, k):
    if not sizes:
        return 0
    return min(len(p) for p in set_partitions(list(sizes)) if all(sum(b) <= k for b in p))


def _nx_graph(instance):
    g = nx.Graph()
    g.add_nodes_from(range(instance.graph.vertex_count))
    g.add_edges_from(instance.graph.edges)
    return g


def brute_force_optimum(instance):
    """Exact optimum by exhaustive enumeration of per-reading simple paths.

    Plans are enumerated reading by reading with no bound-based pruning;
    identical partial edge-load states are merged, which keeps the full
    product tractable without discarding any reachable final state.
    """
    g = _nx_graph(instance)
    k = instance.k
    states = {(): None}  # frozen sorted (edge, items) tuple
    for v in instance.vertices:
        paths = list(nx.all_simple_paths(g, v, 0))
        nxt = {}
        for state in states:
            loads = {e: list(items) for e, items in state}
            for p in paths:
                new = {e: list(items) for e, items in loads.items()}
                for e in zip(p, p[1:]):
                    new.setdefault(e, []).append(instance.sizes[v])
                key = tuple(sorted((e, tuple(sorted(items))) for e, items in new.items()))
                nxt[key] = None
        states = nxt
    best = None
    for state in states:
        cost = sum(brute_min_bins(items, k) if any(s != 1 for s in items) else -(-len(items) // k)
                   for _, items in state)
        best = cost if best is None else min(best, cost)
    return best or 0


def partitionable(elements):
    total = sum(elements)
    if total % 2:
        return False
    idx = range(len(elements))
    return any(sum(elements[i] for i in c) == total // 2
               for r in range(len(elements) + 1) for c in combinations(idx, r))


def min_cover(n, subsets):
    universe = set(range(1, n + 1))
    for r in range(1, len(subsets) + 1):
        for c in combinations(subsets, r):
            if set().union(*c) == universe:
                return r
    return None


def spt_hops_on_gadget(ell, k):
    """Hand-derived hop count of the single-lane corridor tree on the gadget instance."""
    total = 0
    for i in range(1, ell + 1):
        lane = k // i
        total += k * k - lane  # non-corridor lanes: one packet per vertex
        through = (i - 1) * (k * k + 1) + 1  # readings leaving gateway i
        total += -(-through // k)
        total += sum(-(-(through + j) // k) for j in range(1, lane + 1))
    return total


def gadget_opt_hops(ell, k):
    """Hand-derived hop count of the lane-filling strategy."""
    lanes = k * k * ell
    corridor_extras = sum(k // i for i in range(1, ell + 1))
    distribution = sum(i * k for i in range(2, ell + 1))
    return lanes + corridor_extras + distribution + ell
