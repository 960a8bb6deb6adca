"""Seeded generators for every instance family used by the workbench."""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Sequence

from .errors import EllTooLarge, FormatError, GeneratorError, NotAGadget
from .graph_core import SINK, Instance, validate_instance

MAX_ELL = 6


def gen_line(n: int, k: int, sizes: Sequence[int] | None = None) -> Instance:
    """Path sink - 1 - 2 - ... - n; vertex i sits at distance i."""
    if n < 1 or k < 1:
        raise GeneratorError(f"line needs n >= 1 and k >= 1 (got n={n}, k={k})")
    edges = [(i - 1, i) for i in range(1, n + 1)]
    return validate_instance(Instance.build(n, edges, k, sizes))


def grid_id(row: int, col: int, n_cols: int) -> int:
    """Row-major id of the 1-indexed grid cell (row, col); (1, 1) is the sink."""
    return (row - 1) * n_cols + (col - 1)


def grid_edges(m: int, n: int) -> list[tuple[int, int]]:
    edges = []
    for r in range(1, m + 1):
        for c in range(1, n + 1):
            v = grid_id(r, c, n)
            if c < n:
                edges.append((v, grid_id(r, c + 1, n)))
            if r < m:
                edges.append((v, grid_id(r + 1, c, n)))
    return edges


def gen_grid(m: int, n: int, k: int) -> Instance:
    if m < 1 or n < 1 or m * n < 2:
        raise GeneratorError(f"grid needs at least two cells (got {m}x{n})")
    return validate_instance(Instance.build(m * n - 1, grid_edges(m, n), k))


def grid_shape(instance: Instance) -> tuple[int, int] | None:
    """Recover (rows, cols) if ``instance`` is a row-major grid as built by gen_grid."""
    total = instance.graph.vertex_count
    for m in range(1, total + 1):
        if total % m:
            continue
        n = total // m
        edges = grid_edges(m, n)
        if len(edges) == len(instance.graph.edges) and \
                all(instance.graph.has_edge(u, v) for u, v in edges):
            return m, n
    return None


def _recursive_tree(n: int, rng: random.Random) -> list[tuple[int, int]]:
    return [(rng.randrange(v), v) for v in range(1, n + 1)]


def gen_random_tree(n: int, k: int, seed: int) -> Instance:
    """Uniform random recursive tree: vertex v attaches to a uniform vertex in 0..v-1."""
    if n < 1:
        raise GeneratorError("random tree needs n >= 1")
    rng = random.Random(seed)
    return validate_instance(Instance.build(n, _recursive_tree(n, rng), k))


def gen_random_connected(n: int, density: float, k: int, seed: int) -> Instance:
    """Random recursive spanning tree plus every other pair with probability ``density``."""
    if n < 1:
        raise GeneratorError("random graph needs n >= 1")
    if not 0 <= density <= 1:
        raise GeneratorError(f"density must lie in [0, 1], got {density}")
    rng = random.Random(seed)
    tree = _recursive_tree(n, rng)
    present = {(min(e), max(e)) for e in tree}
    extra = []
    for e in combinations(range(n + 1), 2):
        if e not in present and rng.random() < density:
            extra.append(e)
    return validate_instance(Instance.build(n, tree + extra, k))


# -- lower-bound gadget instance --------------------------------------------

@dataclass(frozen=True)
class GadgetSpec:
    """Annotations for the layered gadget instance.

    ``lanes[i-1][j]`` is lane j of gadget i listed tail first; lane 0 of
    every gadget is its corridor (SPC) segment.
    """

    ell: int
    k: int
    gateways: tuple[int, ...]
    lanes: tuple[tuple[tuple[int, ...], ...], ...]
    gadget_of: dict = field(compare=False, hash=False)

    @property
    def spc(self) -> frozenset:
        return frozenset(v for g in self.lanes for v in g[0])

    def heads(self, i: int) -> list[int]:
        return [lane[-1] for lane in self.lanes[i - 1]]

    def tails(self, i: int) -> list[int]:
        return [lane[0] for lane in self.lanes[i - 1]]

    @property
    def on_ramps(self) -> list[tuple[int, int]]:
        return [(h, self.gateways[i - 1]) for i in range(2, self.ell + 1) for h in self.heads(i - 1)]

    @property
    def off_ramps(self) -> list[tuple[int, int]]:
        return [(self.gateways[i - 1], t) for i in range(1, self.ell + 1) for t in self.tails(i)[1:]]

    def flags(self) -> list[tuple[int, str, int]]:
        out = []
        for i in range(1, self.ell + 1):
            out.append((self.gateways[i - 1], "gateway", i))
            for j, lane in enumerate(self.lanes[i - 1]):
                for v in lane:
                    if j == 0:
                        out.append((v, "spc", i))
                    if v == lane[-1]:
                        out.append((v, "head", i))
                    if v == lane[0]:
                        out.append((v, "tail", i))
        order = {"gateway": 0, "spc": 1, "head": 2, "tail": 3}
        return sorted(out, key=lambda t: (t[0], order[t[1]]))


def gen_gadget(ell: int) -> tuple[Instance, GadgetSpec]:
    """Build the layered instance with ``ell`` gadgets and capacity ``k = ell!``.

    Gadget 1 is farthest from the sink. Gadget i has i*k lanes of k/i
    vertices plus a gateway adjacent to every tail of gadget i and every
    head of gadget i-1; heads of gadget ell touch the sink.
    """
    if ell < 2:
        raise GeneratorError(f"gadget instance needs ell >= 2, got {ell}")
    if ell > MAX_ELL:
        raise EllTooLarge(f"ell={ell} exceeds the memory guard ({MAX_ELL})")
    k = math.factorial(ell)
    next_id = 1
    gateways, lanes, gadget_of = [], [], {}
    edges = []
    for i in range(1, ell + 1):
        gw = next_id
        next_id += 1
        gateways.append(gw)
        gadget_of[gw] = i
        glanes = []
        for _ in range(i * k):
            lane = tuple(range(next_id, next_id + k // i))
            next_id += k // i
            glanes.append(lane)
            for v in lane:
                gadget_of[v] = i
            edges += list(zip(lane, lane[1:]))
            edges.append((gw, lane[0]))
        if i > 1:
            edges += [(lane[-1], gw) for lane in lanes[-1]]
        lanes.append(tuple(glanes))
    edges += [(SINK, lane[-1]) for lane in lanes[-1]]
    instance = validate_instance(Instance.build(next_id - 1, edges, k))
    return instance, GadgetSpec(ell, k, tuple(gateways), tuple(lanes), gadget_of)


def format_annotations(spec: GadgetSpec) -> str:
    return "".join(f"a {v} {flag} gadget={i}\n" for v, flag, i in spec.flags())


def parse_annotations(text: str, instance: Instance) -> GadgetSpec:
    """Rebuild the GadgetSpec for ``instance`` from its sidecar annotation file."""
    gateways = set()
    for ln in text.splitlines():
        tok = ln.split()
        if not tok:
            continue
        if tok[0] != "a" or len(tok) != 4 or not tok[3].startswith("gadget="):
            raise FormatError(f"bad annotation line {ln!r}")
        if tok[2] == "gateway":
            gateways.add(int(tok[1]))
    ell = len(gateways)
    try:
        ref, spec = gen_gadget(ell)
    except GeneratorError as exc:
        raise NotAGadget(str(exc)) from exc
    if ref != instance or format_annotations(spec) != "".join(
            ln.strip() + "\n" for ln in text.splitlines() if ln.strip()):
        raise NotAGadget("annotations do not describe this instance")
    return spec


# -- NP-hardness reduction families -----------------------------------------

@dataclass(frozen=True)
class SetCoverSpec:
    n: int
    subsets: tuple[frozenset, ...]

    @classmethod
    def of(cls, n: int, subsets) -> "SetCoverSpec":
        return cls(n, tuple(frozenset(s) for s in subsets))

    @property
    def m(self) -> int:
        return len(self.subsets)

    @property
    def k(self) -> int:
        return max(len(s) for s in self.subsets)


def gen_setcover(spec: SetCoverSpec) -> Instance:
    """Three-level instance: sets adjacent to the sink, elements below their sets,
    and k-1 enforcer leaves on every set vertex. Elements are numbered 1..n.

    Ids: sets 1..m, elements m+1..m+n, then the enforcers set by set.
    """
    if not spec.subsets:
        raise GeneratorError("set cover needs at least one subset")
    universe = set(range(1, spec.n + 1))
    for s in spec.subsets:
        if not s or not s <= universe:
            raise GeneratorError(f"subset {sorted(s)} is empty or leaves the ground set")
    covered = set().union(*spec.subsets)
    if covered != universe:
        raise GeneratorError(f"elements {sorted(universe - covered)} are in no subset")
    m, k = spec.m, spec.k
    edges = [(SINK, i) for i in range(1, m + 1)]
    for i, s in enumerate(spec.subsets, start=1):
        edges += [(i, m + x) for x in sorted(s)]
    nxt = m + spec.n + 1
    for i in range(1, m + 1):
        for _ in range(k - 1):
            edges.append((i, nxt))
            nxt += 1
    return validate_instance(Instance.build(nxt - 1, edges, k))


@dataclass(frozen=True)
class SetPartitionSpec:
    elements: tuple[int, ...]
    shape: str = "neck-tree"

    @property
    def k(self) -> int:
        return sum(self.elements) // 2


def gen_setpartition(spec: SetPartitionSpec) -> Instance:
    """Line: first listed element farthest from the sink. Neck-tree: every element
    is a leaf on a neck vertex (reading size k) adjacent to the sink."""
    elems = list(spec.elements)
    total = sum(elems)
    if not elems or total % 2:
        raise GeneratorError(f"elements must sum to 2k, got sum {total}")
    k = total // 2
    if any(not 1 <= x <= k for x in elems):
        raise GeneratorError(f"every element must lie in [1, {k}]")
    if spec.shape == "line":
        return gen_line(len(elems), k, sizes=elems[::-1])
    if spec.shape == "neck-tree":
        edges = [(SINK, 1)] + [(1, 2 + j) for j in range(len(elems))]
        return validate_instance(Instance.build(len(elems) + 1, edges, k, [k, *elems]))
    raise GeneratorError(f"unknown set-partition shape {spec.shape!r}")
