"""Command line entry point: gen, route, bounds, oracle, verify, experiment."""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .bounds import bound_report, raw_bounds
from .errors import ConvergecastError, LimitsExceeded, TraceError
from .experiments import PRESETS, ExperimentConfig, gnuplot_script, run_experiment, to_csv, with_overrides
from .graph_core import ParentPolicy, format_instance, read_instance
from .instance_gen import (SetCoverSpec, SetPartitionSpec, format_annotations, gen_gadget, gen_grid,
                           gen_line, gen_random_connected, gen_random_tree, gen_setcover,
                           gen_setpartition, parse_annotations)
from .oracle import OracleLimits, solve_exact
from .routing import (ALGORITHMS, check_elementary_property, check_shortest_path_property,
                      format_trace, read_trace, route, validate_trace)


def _ints(text):
    return [int(x) for x in text.split(",") if x.strip()]


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_gen(args) -> int:
    spec = None
    fam = args.family
    if fam == "line":
        inst = gen_line(args.n, args.k, _ints(args.sizes) if args.sizes else None)
    elif fam == "grid":
        inst = gen_grid(args.rows, args.cols, args.k)
    elif fam == "tree":
        inst = gen_random_tree(args.n, args.k, args.seed)
    elif fam == "random":
        inst = gen_random_connected(args.n, args.density, args.k, args.seed)
    elif fam == "gadget":
        inst, spec = gen_gadget(args.ell)
    elif fam == "setcover":
        subsets = [_ints(s) for s in args.sets.split(";")]
        inst = gen_setcover(SetCoverSpec.of(args.n, subsets))
    else:
        inst = gen_setpartition(SetPartitionSpec(tuple(_ints(args.elements)), args.shape))
    _emit(format_instance(inst), args.out)
    if spec is not None:
        ann = format_annotations(spec)
        if args.out:
            Path(args.out + ".ann").write_text(ann)
        else:
            sys.stderr.write(ann)
    return 0


def _load_spec(args, inst):
    if not args.annotations:
        return None
    return parse_annotations(Path(args.annotations).read_text(), inst)


def cmd_route(args) -> int:
    inst = read_instance(args.instance)
    spec = _load_spec(args, inst)
    if args.policy == "prefer-spc":
        if spec is None:
            raise SystemExit("prefer-spc needs --annotations")
        policy = ParentPolicy.prefer_set(spec.spc)
    else:
        policy = ParentPolicy.parse(args.policy)
    trace = route(inst, args.algo, policy=policy, spec=spec, seed=args.seed)
    _emit(format_trace(trace), args.out)
    m = validate_trace(inst, trace)
    print(f"total={m.total_hops} full={m.full_hops} partial={m.partial_hops}", file=sys.stderr)
    return 0


def cmd_bounds(args) -> int:
    inst = read_instance(args.instance)
    if args.raw:
        raw = raw_bounds(inst)
        row = {k: ("" if v is None else str(v)) for k, v in raw.items()}
    else:
        row = {k: ("" if v is None else str(v)) for k, v in bound_report(inst).as_row().items()}
    text = ""
    if args.header:
        text += ",".join(row) + "\n"
    text += ",".join(row.values()) + "\n"
    _emit(text, args.out)
    return 0


def cmd_oracle(args) -> int:
    inst = read_instance(args.instance)
    try:
        opt, plan = solve_exact(inst, OracleLimits.from_env())
    except LimitsExceeded as exc:
        print(f"oracle refused: {exc}", file=sys.stderr)
        return 2
    _emit(f"optimum {opt}\n" + plan.format(), args.out)
    return 0


def cmd_verify(args) -> int:
    inst = read_instance(args.instance)
    trace = read_trace(args.trace, inst)
    try:
        m = validate_trace(inst, trace)
    except TraceError as exc:
        where = f" at seq {exc.seq}" if exc.seq is not None else ""
        print(f"INVALID {type(exc).__name__}{where}: {exc}")
        return 1
    print(f"total_hops={m.total_hops} full_hops={m.full_hops} partial_hops={m.partial_hops} "
          f"reading_distance_sum={m.reading_distance_sum}")
    print(f"shortest_path_property={check_shortest_path_property(inst, trace)}")
    print(f"elementary_property={check_elementary_property(inst, trace)}")
    return 0


def cmd_experiment(args) -> int:
    base = PRESETS[args.preset] if args.preset else ExperimentConfig()
    values = None
    if args.values:
        values = tuple(float(v) if "." in v else int(v) for v in args.values.split(","))
    algos = tuple(args.algos.split(",")) if args.algos else None
    config = with_overrides(
        base, family=args.family, sweep=args.sweep, values=values, trials=args.trials,
        base_seed=args.seed, size=args.size, density=args.density, k=args.k,
        algorithms=algos, oracle=args.oracle, workers=args.workers)
    text = to_csv(config, run_experiment(config))
    _emit(text, args.out)
    if args.gnuplot:
        Path(args.gnuplot).write_text(gnuplot_script(config, args.out or "results.csv"))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="convergecast", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--family", required=True,
                   choices=["line", "grid", "tree", "random", "gadget", "setcover", "setpartition"])
    g.add_argument("--n", type=int, default=10)
    g.add_argument("--k", type=int, default=2)
    g.add_argument("--rows", type=int, default=4)
    g.add_argument("--cols", type=int, default=4)
    g.add_argument("--density", type=float, default=0.3)
    g.add_argument("--ell", type=int, default=2)
    g.add_argument("--sizes", help="comma-separated reading sizes for line vertices 1..n")
    g.add_argument("--sets", help="set cover family, e.g. '1,2;2'")
    g.add_argument("--elements", help="set partition multiset, e.g. '1,2,3'")
    g.add_argument("--shape", default="neck-tree", choices=["line", "neck-tree"])
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)

    r = sub.add_parser("route", help="run a router and write its hop trace")
    r.add_argument("instance")
    r.add_argument("--algo", default="spt", choices=ALGORITHMS)
    r.add_argument("--policy", default="min-id",
                   help="min-id, max-id, random:SEED, round-robin:ROUND, prefer:V1,V2, prefer-spc")
    r.add_argument("--annotations", help="gadget annotation sidecar")
    r.add_argument("--seed", type=int, default=None)
    r.add_argument("--out")
    r.set_defaults(func=cmd_route)

    b = sub.add_parser("bounds", help="print lower bounds as one CSV row")
    b.add_argument("instance")
    b.add_argument("--raw", action="store_true", help="unrounded fractions")
    b.add_argument("--header", action="store_true")
    b.add_argument("--format", default="csv", choices=["csv"])
    b.add_argument("--out")
    b.set_defaults(func=cmd_bounds)

    o = sub.add_parser("oracle", help="exact optimum on a small instance")
    o.add_argument("instance")
    o.add_argument("--out")
    o.set_defaults(func=cmd_oracle)

    v = sub.add_parser("verify", help="replay a trace against an instance")
    v.add_argument("instance")
    v.add_argument("trace")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("experiment", help="run a parameter sweep, write CSV")
    e.add_argument("--preset", choices=sorted(PRESETS))
    e.add_argument("--family")
    e.add_argument("--sweep")
    e.add_argument("--values")
    e.add_argument("--trials", type=int)
    e.add_argument("--size", type=int)
    e.add_argument("--density", type=float)
    e.add_argument("--k", type=int)
    e.add_argument("--algos")
    e.add_argument("--oracle", action="store_true", default=None)
    e.add_argument("--workers", type=int)
    e.add_argument("--seed", type=int)
    e.add_argument("--format", default="csv", choices=["csv"])
    e.add_argument("--gnuplot", help="also write a gnuplot script here")
    e.add_argument("--out")
    e.set_defaults(func=cmd_experiment)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConvergecastError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
