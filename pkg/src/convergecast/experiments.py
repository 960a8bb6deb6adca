"""Parameter sweeps over instance families, written as deterministic CSV."""
from __future__ import annotations

import csv
import io
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from statistics import mean

from .bounds import bound_report, grid_lb
from .errors import ConvergecastError, LimitsExceeded
from .graph_core import ParentPolicy
from .instance_gen import gen_gadget, gen_grid, gen_random_connected, gen_random_tree, grid_shape
from .oracle import OracleLimits, solve_exact
from .routing import route, validate_trace

FAMILIES = ("random", "grid", "tree", "gadget")
SWEEPS = ("size", "density", "k", "ell")


@dataclass(frozen=True)
class ExperimentConfig:
    family: str = "random"
    sweep: str = "size"
    values: tuple = (10, 20, 40)
    trials: int = 20
    base_seed: int = 0
    size: int = 20
    density: float = 0.3
    k: int = 4
    algorithms: tuple = ("spt", "basic")
    bounds: bool = True
    oracle: bool = False
    workers: int = 1
    limits: OracleLimits = field(default_factory=OracleLimits.from_env)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.sweep not in SWEEPS:
            raise ValueError(f"unknown sweep parameter {self.sweep!r}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")


# Desk-scale versions of the three random-topology sweeps (size, density, k).
PRESETS = {
    "random-size": ExperimentConfig(),
    "random-density": ExperimentConfig(sweep="density", values=(0.1, 0.2, 0.3, 0.5)),
    "random-k": ExperimentConfig(sweep="k", values=(2, 4, 8, 16)),
    "grid": ExperimentConfig(family="grid", values=(8, 16, 32), trials=1, algorithms=("sptg", "spt", "basic")),
    "gadget": ExperimentConfig(family="gadget", sweep="ell", values=(2, 3, 4), trials=1,
                               algorithms=("spt", "gadget-opt")),
}


def _point(config: ExperimentConfig, value):
    size, density, k = config.size, config.density, config.k
    if config.sweep == "size":
        size = int(value)
    elif config.sweep == "density":
        density = float(value)
    elif config.sweep == "k":
        k = int(value)
    return size, density, k


def _make_instance(config: ExperimentConfig, value, seed: int):
    size, density, k = _point(config, value)
    if config.family == "random":
        return gen_random_connected(size, density, k, seed), None, f"random-n{size}-p{density}-k{k}-s{seed}"
    if config.family == "tree":
        return gen_random_tree(size, k, seed), None, f"tree-n{size}-k{k}-s{seed}"
    if config.family == "grid":
        return gen_grid(size, size, k), None, f"grid-{size}x{size}-k{k}"
    ell = int(value) if config.sweep == "ell" else 3
    inst, spec = gen_gadget(ell)
    return inst, spec, f"gadget-ell{ell}"


def columns(config: ExperimentConfig) -> list[str]:
    cols = ["kind", "family", "sweep", "value", "trial", "seed", "instance", "n", "k"]
    for a in config.algorithms:
        cols += [f"{a}_total", f"{a}_full", f"{a}_partial"]
    if config.bounds:
        cols += ["lb1", "lb2", "lb3", "best_lb", "ratio_to_best_lb"]
    if config.family == "grid":
        cols += ["grid_lb", "ratio_to_grid_lb"]
    if config.family == "gadget":
        cols += ["ratio_to_gadget_opt"]
    if config.oracle:
        cols += ["oracle", "ratio_to_oracle"]
    return cols + ["error"]


def _fmt(x):
    return f"{x:.6f}" if isinstance(x, float) else ("" if x is None else str(x))


def run_trial(config: ExperimentConfig, point_index: int, trial: int) -> dict:
    value = config.values[point_index]
    seed = config.base_seed + trial
    row = {"kind": "trial", "family": config.family, "sweep": config.sweep, "value": value,
           "trial": trial, "seed": seed}
    try:
        inst, spec, name = _make_instance(config, value, seed)
        row.update(instance=name, n=inst.n, k=inst.k)
        totals = {}
        for algo in config.algorithms:
            policy = ParentPolicy.prefer_set(spec.spc) if spec is not None else None
            m = validate_trace(inst, route(inst, algo, policy=policy, spec=spec))
            totals[algo] = m.total_hops
            row.update({f"{algo}_total": m.total_hops, f"{algo}_full": m.full_hops,
                        f"{algo}_partial": m.partial_hops})
        primary = totals[config.algorithms[0]]
        if config.bounds:
            rep = bound_report(inst)
            best = max(rep.lb1, rep.lb2, rep.lb3)
            row.update(lb1=rep.lb1, lb2=rep.lb2, lb3=rep.lb3, best_lb=best,
                       ratio_to_best_lb=primary / best if best else None)
        if config.family == "grid":
            g = grid_lb(*grid_shape(inst), inst.k)
            row.update(grid_lb=g, ratio_to_grid_lb=primary / g if g else None)
        if config.family == "gadget" and "gadget-opt" in totals:
            row["ratio_to_gadget_opt"] = primary / totals["gadget-opt"]
        if config.oracle and inst.n <= config.limits.max_vertices:
            try:
                opt, _ = solve_exact(inst, config.limits)
                row.update(oracle=opt, ratio_to_oracle=primary / opt if opt else None)
            except LimitsExceeded:
                pass
    except ConvergecastError as exc:
        row["error"] = f"{type(exc).__name__}: {exc}".replace(",", ";")
    return row


def _run_trial_args(args):
    return run_trial(*args)


def run_experiment(config: ExperimentConfig) -> list[dict]:
    """All trial rows in (point, trial) order, each point followed by its mean row."""
    jobs = [(config, p, t) for p in range(len(config.values)) for t in range(config.trials)]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            results = list(pool.map(_run_trial_args, jobs))
    else:
        results = [run_trial(*j) for j in jobs]
    rows = []
    numeric = [c for c in columns(config) if c.endswith(("_total", "_full", "_partial"))
               or c.startswith(("ratio", "lb", "best", "grid_lb", "oracle"))]
    for p, value in enumerate(config.values):
        trial_rows = results[p * config.trials:(p + 1) * config.trials]
        rows += trial_rows
        summary = {"kind": "mean", "family": config.family, "sweep": config.sweep, "value": value}
        for c in numeric:
            vals = [r[c] for r in trial_rows if r.get(c) is not None]
            if vals:
                summary[c] = float(mean(vals))
        rows.append(summary)
    return rows


def to_csv(config: ExperimentConfig, rows: list[dict]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    cols = columns(config)
    writer.writerow(cols)
    for r in rows:
        writer.writerow([_fmt(r.get(c)) for c in cols])
    return buf.getvalue()


def mean_rows(rows: list[dict]) -> list[dict]:
    return [r for r in rows if r["kind"] == "mean"]


def gnuplot_script(config: ExperimentConfig, csv_path: str) -> str:
    """A gnuplot script plotting mean hop counts of every algorithm against the swept value."""
    cols = columns(config)
    plots = []
    for a in config.algorithms:
        idx = cols.index(f"{a}_total") + 1
        plots.append(f"'< grep ^mean {csv_path}' using 4:{idx} with linespoints title '{a}'")
    if config.bounds:
        plots.append(f"'< grep ^mean {csv_path}' using 4:{cols.index('best_lb') + 1} "
                     "with linespoints title 'best lower bound'")
    return ("set datafile separator ','\n"
            f"set xlabel '{config.sweep}'\nset ylabel 'hops'\n"
            "plot " + ", \\\n     ".join(plots) + "\n")


def with_overrides(config: ExperimentConfig, **kw) -> ExperimentConfig:
    return replace(config, **{k: v for k, v in kw.items() if v is not None})
