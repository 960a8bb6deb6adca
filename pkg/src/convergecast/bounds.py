"""Lower bounds on the optimal number of packet hops.

Reading sizes weight the distance-based bounds, so for unit readings they
reduce to the plain vertex counts.
"""
from __future__ import annotations

from dataclasses import asdict, dataclass
from fractions import Fraction

from .graph_core import Instance
from .instance_gen import grid_shape


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def lb1(instance: Instance) -> int:
    """Every non-sink vertex sends at least one packet."""
    return instance.n


def lb2(instance: Instance, raw: bool = False):
    d = instance.distances
    moved = sum(instance.sizes[v] * d[v] for v in instance.vertices)
    return Fraction(moved, instance.k) if raw else _ceil_div(moved, instance.k)


def cut_loads(instance: Instance) -> list[int]:
    """Bytes that must cross the cut between distance i-1 and i, for i = 1..D."""
    d = instance.distances
    depth = max(d)
    loads = [0] * (depth + 1)
    for v in instance.vertices:
        loads[d[v]] += instance.sizes[v]
    # suffix sums: bytes at distance >= i
    for i in range(depth - 1, 0, -1):
        loads[i] += loads[i + 1]
    return loads[1:]


def lb3(instance: Instance, raw: bool = False):
    loads = cut_loads(instance)
    if raw:
        return sum(Fraction(x, instance.k) for x in loads)
    return sum(_ceil_div(x, instance.k) for x in loads)


def grid_lb(m: int, n: int, k: int, raw: bool = False):
    value = Fraction(m * n * (m + n - 2), 2 * k)
    return value if raw else _ceil_div(value.numerator, value.denominator)


def partial_lb(instance: Instance) -> int:
    """Partial hops any valid unit-reading trace must contain."""
    return _ceil_div(instance.n, 2)


@dataclass(frozen=True)
class BoundReport:
    lb1: int
    lb2: int
    lb3: int
    grid_lb: int | None
    partial_lb: int
    best: int

    FIELDS = ("lb1", "lb2", "lb3", "grid_lb", "partial_lb", "best")

    def as_row(self) -> dict:
        return asdict(self)


def bound_report(instance: Instance) -> BoundReport:
    shape = grid_shape(instance)
    g = grid_lb(*shape, instance.k) if shape else None
    vals = [lb1(instance), lb2(instance), lb3(instance), partial_lb(instance)]
    if g is not None:
        vals.append(g)
    return BoundReport(vals[0], vals[1], vals[2], g, vals[3], max(vals))


def raw_bounds(instance: Instance) -> dict:
    """The unrounded fractions, for comparison with the rounded report."""
    shape = grid_shape(instance)
    return {
        "lb1": Fraction(lb1(instance)),
        "lb2": lb2(instance, raw=True),
        "lb3": lb3(instance, raw=True),
        "grid_lb": grid_lb(*shape, instance.k, raw=True) if shape else None,
        "partial_lb": Fraction(instance.n, 2),
    }
