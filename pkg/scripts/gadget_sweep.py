"""SPT on the gadget instances against the lane-filling strategy, for ell = 2..4 (or more).

Prints hop counts next to the closed-form bounds. ell = 5 has k = 120 and
about 72000 vertices; it runs, slowly.
"""
import argparse
from fractions import Fraction

from convergecast.graph_core import ParentPolicy, build_spt
from convergecast.instance_gen import gen_gadget
from convergecast.routing import run_gadget_opt, run_spt, validate_trace


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--ells", default="2,3,4")
    args = ap.parse_args()
    print("ell     k  vertices    spt  gadget_opt  ratio  spt_floor  opt_ceiling")
    for ell in map(int, args.ells.split(",")):
        inst, spec = gen_gadget(ell)
        k = spec.k
        spt = validate_trace(inst, run_spt(inst, build_spt(inst, ParentPolicy.prefer_set(spec.spc))))
        opt = validate_trace(inst, run_gadget_opt(inst, spec))
        floor = k * k * ell + k * k * sum(Fraction(i - 1, i) for i in range(2, ell + 1)) - k * ell
        ceiling = k * k * ell + k * ell * ell + k * ell
        print(f"{ell:3d} {k:5d} {inst.n:9d} {spt.total_hops:6d} {opt.total_hops:11d} "
              f"{spt.total_hops / opt.total_hops:6.3f} {float(floor):10.1f} {ceiling:12d}")


if __name__ == "__main__":
    main()
