"""Run the three random-topology sweeps (size, density, k) and write one CSV each.

    python scripts/random_sweeps.py --out results/ [--trials 20] [--workers 4] [--oracle]
"""
import argparse
from pathlib import Path

from convergecast.experiments import PRESETS, gnuplot_script, mean_rows, run_experiment, to_csv, with_overrides


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="results")
    ap.add_argument("--trials", type=int)
    ap.add_argument("--workers", type=int)
    ap.add_argument("--seed", type=int)
    ap.add_argument("--oracle", action="store_true", default=None,
                    help="add exact optima where the instance is small enough")
    args = ap.parse_args()
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in ("random-size", "random-density", "random-k"):
        config = with_overrides(PRESETS[name], trials=args.trials, workers=args.workers,
                                base_seed=args.seed, oracle=args.oracle)
        rows = run_experiment(config)
        csv_path = out / f"{name}.csv"
        csv_path.write_text(to_csv(config, rows))
        (out / f"{name}.gp").write_text(gnuplot_script(config, csv_path.name))
        for r in mean_rows(rows):
            print(f"{name:15s} {config.sweep}={r['value']:<5} spt={r['spt_total']:9.2f} "
                  f"basic={r['basic_total']:9.2f} spt/best_lb={r['ratio_to_best_lb']:.3f}")


if __name__ == "__main__":
    main()
