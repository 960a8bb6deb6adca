"""Convergecast routers, hop traces, trace replay and the two property checkers."""
from __future__ import annotations

import random
from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import (CapacityExceeded, CausalityViolation, FormatError, NonEdgeHop,
                     NotAGadget, NotAGrid, ReadingDuplicated, ReadingLost, TreeMismatch)
from .graph_core import (SINK, Instance, ParentPolicy, ShortestPathTree, build_spt,
                         tree_depths)
from .instance_gen import GadgetSpec, gen_gadget, grid_id, grid_shape


class Reading(NamedTuple):
    origin: int
    size: int


class PacketHop(NamedTuple):
    seq: int
    src: int
    dst: int
    readings: tuple[Reading, ...]

    @property
    def load(self) -> int:
        return sum(r.size for r in self.readings)


@dataclass(frozen=True)
class HopTrace:
    instance: Instance
    hops: tuple[PacketHop, ...]

    def __len__(self):
        return len(self.hops)


@dataclass(frozen=True)
class Metrics:
    total_hops: int
    full_hops: int
    partial_hops: int
    reading_distance_sum: int


class _Emitter:
    def __init__(self):
        self.hops: list[PacketHop] = []

    def send(self, src, dst, readings):
        self.hops.append(PacketHop(len(self.hops), src, dst, tuple(readings)))


def _first_fit_decreasing(readings: Sequence[Reading], k: int) -> list[list[Reading]]:
    bins: list[list[Reading]] = []
    room: list[int] = []
    for r in sorted(readings, key=lambda r: -r.size):
        for j, free in enumerate(room):
            if r.size <= free:
                bins[j].append(r)
                room[j] -= r.size
                break
        else:
            bins.append([r])
            room.append(k - r.size)
    return bins


def repack(readings: Sequence[Reading], k: int, uccp: bool) -> list[list[Reading]]:
    """Elementary repackaging: maximal full packets and at most one partial (UCCP);
    first-fit-decreasing bins for arbitrary sizes."""
    if uccp:
        return [list(readings[i:i + k]) for i in range(0, len(readings), k)]
    return _first_fit_decreasing(readings, k)


def aggregate_along_tree(instance: Instance, parent: Sequence[int]) -> HopTrace:
    """Wait-for-children aggregation along any tree rooted at the sink.

    Vertices fire in decreasing tree depth, ties by id. Full packets are
    forwarded untouched; partial packets plus the local reading are repacked.
    """
    k, uccp = instance.k, instance.is_uccp
    depth = tree_depths(parent)
    inbox: dict[int, list[list[Reading]]] = defaultdict(list)
    out = _Emitter()
    order = sorted(instance.vertices, key=lambda v: (-depth[v], v))
    for v in order:
        forward, pool = [], []
        for pkt in inbox.pop(v, []):
            if sum(r.size for r in pkt) == k:
                forward.append(pkt)
            else:
                pool.extend(pkt)
        pool.append(Reading(v, instance.sizes[v]))
        for pkt in forward + repack(pool, k, uccp):
            out.send(v, parent[v], pkt)
            inbox[parent[v]].append(pkt)
    return HopTrace(instance, tuple(out.hops))


def check_tree(instance: Instance, tree: ShortestPathTree) -> None:
    d = instance.distances
    if len(tree.parent) != instance.graph.vertex_count or tree.parent[SINK] != -1:
        raise TreeMismatch("parent map does not cover the instance")
    for v in instance.vertices:
        p = tree.parent[v]
        if not (0 <= p < instance.graph.vertex_count) or not instance.graph.has_edge(v, p) \
                or d[p] != d[v] - 1:
            raise TreeMismatch(f"vertex {v}: {p} is not a shortest-path parent")


def run_spt(instance: Instance, tree: ShortestPathTree | None = None) -> HopTrace:
    if tree is None:
        tree = build_spt(instance)
    check_tree(instance, tree)
    return aggregate_along_tree(instance, tree.parent)


def sptg_tree(instance: Instance) -> ShortestPathTree:
    """Columns first, then row 1: every vertex below row 1 points up its column."""
    shape = grid_shape(instance)
    if shape is None:
        raise NotAGrid("instance is not a row-major grid with the sink at (1, 1)")
    m, n = shape
    parent = [-1] * instance.graph.vertex_count
    for r in range(1, m + 1):
        for c in range(1, n + 1):
            v = grid_id(r, c, n)
            if v == SINK:
                continue
            parent[v] = grid_id(r - 1, c, n) if r > 1 else grid_id(1, c - 1, n)
    return ShortestPathTree(tuple(parent), "sptg")


def run_sptg(instance: Instance) -> HopTrace:
    return run_spt(instance, sptg_tree(instance))


def dfs_tree(instance: Instance, seed: int | None = None) -> list[int]:
    """Parent map of a depth-first search from the sink.

    Neighbours are explored in ascending id, or in a seeded shuffled order
    when ``seed`` is given.
    """
    rng = random.Random(seed) if seed is not None else None
    adj = instance.adjacency
    parent = [-1] * instance.graph.vertex_count
    seen = {SINK}

    def order(u):
        nbrs = list(adj[u])
        if rng is not None:
            rng.shuffle(nbrs)
        return iter(nbrs)

    stack = [(SINK, order(SINK))]
    while stack:
        u, it = stack[-1]
        for w in it:
            if w not in seen:
                seen.add(w)
                parent[w] = u
                stack.append((w, order(w)))
                break
        else:
            stack.pop()
    return parent


def run_basic(instance: Instance, seed: int | None = None) -> HopTrace:
    return aggregate_along_tree(instance, dfs_tree(instance, seed))


def run_gadget_opt(instance: Instance, spec: GadgetSpec) -> HopTrace:
    """Lane-filling strategy for the gadget instance.

    The gateway of gadget i spreads the (i-1)k full packets it receives over
    all i*k lanes, (i-1)k/i readings per lane, so every lane head emits a
    full packet. Gateway readings, which the lanes have no room for, ride
    up the corridor lane as one separate partial packet.
    """
    if instance != gen_gadget(spec.ell)[0]:
        raise NotAGadget("instance does not match the gadget spec")
    k, ell = spec.k, spec.ell
    out = _Emitter()
    incoming: list[Reading] = []  # lane readings arriving at the current gateway
    extras: list[Reading] = []    # gateway readings travelling as a partial packet
    for i in range(1, ell + 1):
        gw = spec.gateways[i - 1]
        lanes = spec.lanes[i - 1]
        extras = extras + [Reading(gw, 1)]
        share = len(incoming) // len(lanes)
        lane_pkts = [incoming[j * share:(j + 1) * share] for j in range(len(lanes))]
        for lane, pkt in zip(lanes, lane_pkts):
            if pkt:
                out.send(gw, lane[0], pkt)
        out.send(gw, lanes[0][0], extras)
        nxt = spec.gateways[i] if i < ell else SINK
        incoming = []
        for j, lane in enumerate(lanes):
            pkt = list(lane_pkts[j])
            for pos, v in enumerate(lane):
                pkt.append(Reading(v, 1))
                dst = lane[pos + 1] if pos + 1 < len(lane) else nxt
                out.send(v, dst, pkt)
                if j == 0:
                    out.send(v, dst, extras)
            incoming.extend(pkt)
    return HopTrace(instance, tuple(out.hops))


# -- replay validation and property checkers ---------------------------------

def validate_trace(instance: Instance, trace: HopTrace) -> Metrics:
    """Replay ``trace`` against per-vertex buffers and return its metrics.

    Raises the matching TraceError on a non-edge hop, an over-capacity
    packet, a reading sent from a vertex that does not hold it, a duplicate
    reading, or a reading that never reaches the sink.
    """
    k = instance.k
    where = {v: v for v in instance.vertices}
    delivered = set()
    full = partial = moved = 0
    for hop in trace.hops:
        if not instance.graph.has_edge(hop.src, hop.dst):
            raise NonEdgeHop(f"hop {hop.seq}: ({hop.src}, {hop.dst}) is not an edge", hop.seq)
        if not hop.readings:
            raise CausalityViolation(f"hop {hop.seq} carries no readings", hop.seq)
        if hop.load > k:
            raise CapacityExceeded(f"hop {hop.seq} carries {hop.load} > {k} bytes", hop.seq)
        origins = [r.origin for r in hop.readings]
        if len(set(origins)) != len(origins):
            dup = next(o for o in origins if origins.count(o) > 1)
            raise ReadingDuplicated(dup, hop.seq)
        for r in hop.readings:
            if r.origin in delivered:
                raise ReadingDuplicated(r.origin, hop.seq)
            if r.origin not in where or instance.sizes[r.origin] != r.size:
                raise CausalityViolation(
                    f"hop {hop.seq}: unknown reading {r.origin}:{r.size}", hop.seq)
            if where[r.origin] != hop.src:
                raise CausalityViolation(
                    f"hop {hop.seq}: reading {r.origin} is not at vertex {hop.src}", hop.seq)
            where[r.origin] = hop.dst
            if hop.dst == SINK:
                delivered.add(r.origin)
        moved += len(hop.readings)
        if hop.load == k:
            full += 1
        else:
            partial += 1
    for v in instance.vertices:
        if v not in delivered:
            raise ReadingLost(v)
    return Metrics(full + partial, full, partial, moved)


def check_shortest_path_property(instance: Instance, trace: HopTrace) -> bool:
    d = instance.distances
    return all(d[h.dst] == d[h.src] - 1 for h in trace.hops)


def partial_counts(instance: Instance, trace: HopTrace) -> dict[int, int]:
    counts: dict[int, int] = defaultdict(int)
    for h in trace.hops:
        if h.load < instance.k:
            counts[h.src] += 1
    return dict(counts)


def check_elementary_property(instance: Instance, trace: HopTrace) -> bool:
    return all(c <= 1 for c in partial_counts(instance, trace).values())


# -- trace file format ------------------------------------------------------

def format_trace(trace: HopTrace) -> str:
    return "".join(
        f"h {h.seq} {h.src} {h.dst} " + ",".join(f"{r.origin}:{r.size}" for r in h.readings) + "\n"
        for h in trace.hops)


def parse_trace(text: str, instance: Instance) -> HopTrace:
    hops = []
    for ln in text.splitlines():
        if not ln.strip():
            continue
        tok = ln.split()
        try:
            if tok[0] != "h" or len(tok) != 5:
                raise ValueError
            readings = tuple(Reading(*map(int, item.split(":"))) for item in tok[4].split(","))
            hops.append(PacketHop(int(tok[1]), int(tok[2]), int(tok[3]), readings))
        except (ValueError, TypeError) as exc:
            raise FormatError(f"bad trace line {ln!r}") from exc
    return HopTrace(instance, tuple(hops))


def read_trace(path, instance: Instance) -> HopTrace:
    with open(path) as fh:
        return parse_trace(fh.read(), instance)


def write_trace(trace: HopTrace, path) -> None:
    with open(path, "w") as fh:
        fh.write(format_trace(trace))


ALGORITHMS = ("spt", "sptg", "basic", "gadget-opt")


def route(instance: Instance, algo: str, policy: ParentPolicy | None = None,
          spec: GadgetSpec | None = None, seed: int | None = None) -> HopTrace:
    """Dispatch by algorithm name; used by the CLI and the experiment harness."""
    if algo == "spt":
        return run_spt(instance, build_spt(instance, policy))
    if algo == "sptg":
        return run_sptg(instance)
    if algo == "basic":
        return run_basic(instance, seed)
    if algo == "gadget-opt":
        if spec is None:
            raise NotAGadget("gadget-opt needs the gadget annotations")
        return run_gadget_opt(instance, spec)
    raise ValueError(f"unknown algorithm {algo!r}")
