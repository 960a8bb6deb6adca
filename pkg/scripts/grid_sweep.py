"""SPT-G, SPT and BASIC on square grids, against the grid cut bound."""
import argparse
from fractions import Fraction

from convergecast.bounds import grid_lb
from convergecast.instance_gen import gen_grid
from convergecast.routing import route, validate_trace


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--sides", default="8,16,32")
    ap.add_argument("--k", type=int, default=4)
    args = ap.parse_args()
    k = args.k
    print("side  grid_lb   sptg    spt   basic  sptg/lb  cap")
    for side in map(int, args.sides.split(",")):
        inst = gen_grid(side, side, k)
        totals = {a: validate_trace(inst, route(inst, a)).total_hops for a in ("sptg", "spt", "basic")}
        lb = grid_lb(side, side, k)
        cap = Fraction(2 * side + 2 * k, 2 * side - 2)
        print(f"{side:4d} {lb:8d} {totals['sptg']:6d} {totals['spt']:6d} {totals['basic']:7d} "
              f"{totals['sptg'] / lb:8.3f} {float(cap):5.3f}")


if __name__ == "__main__":
    main()
