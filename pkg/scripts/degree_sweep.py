"""Sweep the per-degree radial sampling kernels and tabulate their size.

For data on spheres of radii e^j the reconstruction uses one 1-D kernel per
spherical-harmonic degree k.  The theory promises these stay uniformly
bounded with k once the Fourier sup is weighted by k; this script prints the
sweep so the claim can be eyeballed:

    python3 scripts/degree_sweep.py --p 2 --k-max 32
"""

import argparse

import numpy as np

from polyshannon import decay_check


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=3, help="ambient dimension")
    ap.add_argument("--p", type=int, default=1, help="polyharmonic smoothness")
    ap.add_argument("--k-max", type=int, default=32)
    args = ap.parse_args()

    rows = decay_check(args.n, args.p, args.k_max)
    print(f"{'k':>4} {'sup|fourier|':>14} {'k*sup':>12} {'sup|kernel|':>12}")
    for r in rows:
        print(f"{r.degree:>4} {r.sup_fourier:>14.6g} "
              f"{r.degree * r.sup_fourier:>12.6g} {r.sup_time:>12.6g}")

    window = [r for r in rows if r.degree >= max(4, args.k_max // 4)]
    prods = [r.degree * r.sup_fourier for r in window]
    sups = [r.sup_time for r in window]
    print(f"\nk*sup_fourier spread (max/min)    {max(prods) / min(prods):.4f}")
    print(f"sup_time spread (max/median)      {max(sups) / float(np.median(sups)):.4f}")


if __name__ == "__main__":
    main()
