"""Graphs, convergecast instances, BFS distances and shortest path trees.

Vertex 0 is always the sink. Every other vertex holds exactly one reading
of ``sizes[v]`` bytes, and packets carry at most ``k`` bytes.
"""
from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

from .errors import DisconnectedGraph, FormatError, MalformedEdge, SizeOutOfRange

SINK = 0


def _norm_edge(u: int, v: int) -> tuple[int, int]:
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    vertex_count: int
    edges: frozenset

    @classmethod
    def from_edges(cls, vertex_count: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        seen = set()
        for u, v in edges:
            if u == v:
                raise MalformedEdge(f"self-loop at {u}")
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise MalformedEdge(f"edge ({u}, {v}) references a missing vertex")
            e = _norm_edge(u, v)
            if e in seen:
                raise MalformedEdge(f"duplicate edge {e}")
            seen.add(e)
        return cls(vertex_count, frozenset(seen))

    @cached_property
    def adjacency(self) -> tuple[tuple[int, ...], ...]:
        adj: list[list[int]] = [[] for _ in range(self.vertex_count)]
        for u, v in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return tuple(tuple(sorted(a)) for a in adj)

    def sorted_edges(self) -> list[tuple[int, int]]:
        return sorted(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return _norm_edge(u, v) in self.edges


@dataclass(frozen=True)
class Instance:
    """A convergecast problem: graph, packet capacity and reading sizes.

    ``sizes`` is indexed by vertex id; ``sizes[0]`` is 0 because the sink
    holds no reading.
    """

    graph: Graph
    k: int
    sizes: tuple[int, ...]

    @classmethod
    def build(cls, n: int, edges: Iterable[tuple[int, int]], k: int,
              sizes: Sequence[int] | None = None) -> "Instance":
        """Convenience constructor: ``n`` non-sink vertices, ``sizes`` for vertices 1..n."""
        if sizes is None:
            sizes = [1] * n
        if len(sizes) != n:
            raise ValueError(f"expected {n} sizes, got {len(sizes)}")
        return cls(Graph.from_edges(n + 1, edges), k, (0, *sizes))

    @property
    def sink(self) -> int:
        return SINK

    @property
    def n(self) -> int:
        return self.graph.vertex_count - 1

    @property
    def vertices(self) -> range:
        """Non-sink vertex ids."""
        return range(1, self.graph.vertex_count)

    @property
    def is_uccp(self) -> bool:
        return all(s == 1 for s in self.sizes[1:])

    @property
    def mode(self) -> str:
        return "uccp" if self.is_uccp else "ccp"

    @property
    def adjacency(self):
        return self.graph.adjacency

    @cached_property
    def distances(self) -> "DistanceMap":
        return bfs_distances(self)


def validate_instance(instance: Instance) -> Instance:
    """Return ``instance`` unchanged if it is well formed, else raise."""
    g = instance.graph
    if g.vertex_count < 1:
        raise MalformedEdge("graph has no sink")
    if instance.k < 1:
        raise ValueError(f"capacity k must be positive, got {instance.k}")
    if len(instance.sizes) != g.vertex_count:
        raise ValueError("sizes must have one entry per vertex")
    if instance.sizes[SINK] != 0:
        raise SizeOutOfRange(SINK, instance.sizes[SINK], instance.k)
    for u, v in g.edges:
        if u == v or not (0 <= u < g.vertex_count and 0 <= v < g.vertex_count):
            raise MalformedEdge(f"bad edge ({u}, {v})")
    for v in instance.vertices:
        s = instance.sizes[v]
        if not 1 <= s <= instance.k:
            raise SizeOutOfRange(v, s, instance.k)
    reached = _reachable(g.adjacency, SINK)
    if len(reached) != g.vertex_count:
        missing = min(set(range(g.vertex_count)) - reached)
        raise DisconnectedGraph(f"vertex {missing} cannot reach the sink")
    return instance


def _reachable(adj, source):
    seen = {source}
    stack = [source]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return seen


class DistanceMap(tuple):
    """Per-vertex BFS hop distance to the sink (a plain tuple indexed by vertex)."""

    @property
    def depth(self) -> int:
        return max(self) if self else 0


def bfs_distances(instance: Instance) -> DistanceMap:
    adj = instance.adjacency
    dist = [-1] * instance.graph.vertex_count
    dist[SINK] = 0
    queue = deque([SINK])
    while queue:
        u = queue.popleft()
        for w in adj[u]:
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                queue.append(w)
    if min(dist) < 0:
        raise DisconnectedGraph("graph is not connected")
    return DistanceMap(dist)


@dataclass(frozen=True)
class ParentPolicy:
    """Tie-break rule for choosing among several shortest-path parents.

    kind is one of ``min-id``, ``max-id``, ``random``, ``round-robin``,
    ``prefer-set``. ``seed`` drives ``random``; ``round`` selects the
    position in the rotation for ``round-robin`` (successive rounds cycle
    through the eligible parents in id order); ``prefer`` lists vertices
    that win ties whenever they are eligible.
    """

    kind: str = "min-id"
    seed: int | None = None
    round: int = 0
    prefer: frozenset = field(default_factory=frozenset)

    KINDS = ("min-id", "max-id", "random", "round-robin", "prefer-set")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown parent policy {self.kind!r}")

    @classmethod
    def min_id(cls):
        return cls("min-id")

    @classmethod
    def max_id(cls):
        return cls("max-id")

    @classmethod
    def random(cls, seed: int):
        return cls("random", seed=seed)

    @classmethod
    def round_robin(cls, round: int = 0):
        return cls("round-robin", round=round)

    @classmethod
    def prefer_set(cls, vertices: Iterable[int]):
        return cls("prefer-set", prefer=frozenset(vertices))

    @property
    def tag(self) -> str:
        if self.kind == "random":
            return f"random:{self.seed}"
        if self.kind == "round-robin":
            return f"round-robin:{self.round}"
        if self.kind == "prefer-set":
            return "prefer:" + ",".join(map(str, sorted(self.prefer)))
        return self.kind

    @classmethod
    def parse(cls, text: str) -> "ParentPolicy":
        name, _, arg = text.partition(":")
        if name in ("min-id", "max-id"):
            return cls(name)
        if name == "random":
            return cls.random(int(arg or 0))
        if name == "round-robin":
            return cls.round_robin(int(arg or 0))
        if name in ("prefer", "prefer-set"):
            return cls.prefer_set(int(x) for x in arg.split(",") if x)
        raise ValueError(f"unknown parent policy {text!r}")


@dataclass(frozen=True)
class ShortestPathTree:
    parent: tuple[int, ...]  # parent[0] == -1
    policy_tag: str

    def children(self) -> list[list[int]]:
        kids: list[list[int]] = [[] for _ in self.parent]
        for v, p in enumerate(self.parent):
            if p >= 0:
                kids[p].append(v)
        return kids


def eligible_parents(instance: Instance, v: int) -> list[int]:
    d = instance.distances
    return [w for w in instance.adjacency[v] if d[w] == d[v] - 1]


def build_spt(instance: Instance, policy: ParentPolicy | None = None) -> ShortestPathTree:
    policy = policy or ParentPolicy.min_id()
    rng = random.Random(policy.seed) if policy.kind == "random" else None
    parent = [-1] * instance.graph.vertex_count
    for v in instance.vertices:
        cands = eligible_parents(instance, v)
        if policy.kind == "min-id":
            p = cands[0]
        elif policy.kind == "max-id":
            p = cands[-1]
        elif policy.kind == "random":
            p = rng.choice(cands)
        elif policy.kind == "round-robin":
            p = cands[policy.round % len(cands)]
        else:
            preferred = [w for w in cands if w in policy.prefer]
            p = preferred[0] if preferred else cands[0]
        parent[v] = p
    return ShortestPathTree(tuple(parent), policy.tag)


def tree_depths(parent: Sequence[int]) -> list[int]:
    """Depth of every vertex in a parent-pointer tree rooted at the sink."""
    depth = [-1] * len(parent)
    depth[SINK] = 0
    for v in range(len(parent)):
        chain = []
        u = v
        while depth[u] < 0:
            chain.append(u)
            u = parent[u]
            if u < 0 or len(chain) > len(parent):
                raise ValueError(f"vertex {v} does not reach the sink")
        for w in reversed(chain):
            depth[w] = depth[parent[w]] + 1
    return depth


# -- instance file format ---------------------------------------------------

def format_instance(instance: Instance) -> str:
    lines = [f"{instance.mode} k={instance.k} n={instance.n}"]
    lines += [f"e {u} {v}" for u, v in instance.graph.sorted_edges()]
    lines += [f"s {v} {instance.sizes[v]}" for v in instance.vertices if instance.sizes[v] != 1]
    return "\n".join(lines) + "\n"


def parse_instance(text: str) -> Instance:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise FormatError("empty instance file")
    head = lines[0].split()
    try:
        mode = head[0]
        fields = dict(tok.split("=", 1) for tok in head[1:])
        k, n = int(fields["k"]), int(fields["n"])
    except (IndexError, KeyError, ValueError) as exc:
        raise FormatError(f"bad header {lines[0]!r}") from exc
    if mode not in ("uccp", "ccp"):
        raise FormatError(f"unknown mode {mode!r}")
    edges, sizes = [], [1] * n
    for ln in lines[1:]:
        tok = ln.split()
        try:
            if tok[0] == "e" and len(tok) == 3:
                edges.append((int(tok[1]), int(tok[2])))
            elif tok[0] == "s" and len(tok) == 3:
                v = int(tok[1])
                if not 1 <= v <= n:
                    raise FormatError(f"size line for missing vertex {v}")
                sizes[v - 1] = int(tok[2])
            else:
                raise FormatError(f"unrecognised line {ln!r}")
        except ValueError as exc:
            raise FormatError(f"unrecognised line {ln!r}") from exc
    instance = validate_instance(Instance.build(n, edges, k, sizes))
    if instance.mode != mode:
        raise FormatError(f"header says {mode} but readings make it {instance.mode}")
    return instance


def read_instance(path) -> Instance:
    with open(path) as fh:
        return parse_instance(fh.read())


def write_instance(instance: Instance, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_instance(instance))
