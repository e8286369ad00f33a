"""Reconstruction error by radial shell for data sampled on concentric spheres.

Builds a random polyharmonic-spline field whose sphere samples at radii e^j,
j in [j_min, j_max], carry complete cardinal data, reconstructs it from those
samples alone, and reports the error shell by shell.  Inside the data range
the error sits at the kernel-resolution floor; approaching the outermost
spheres it climbs once the query radius leaves the well-covered zone:

    python3 scripts/sphere_shells.py --degree-max 6 --queries 4000
"""

import argparse

import numpy as np

from polyshannon import random_polyspline_field, reconstruct_spherical


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--degree-max", type=int, default=6)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--j-min", type=int, default=-6)
    ap.add_argument("--j-max", type=int, default=6)
    ap.add_argument("--queries", type=int, default=2000)
    ap.add_argument("--seed", type=int, default=20260822)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    gen = random_polyspline_field(
        rng, n=3, p=args.p, degree_max=args.degree_max,
        j_min=args.j_min, j_max=args.j_max,
    )
    fld = gen.sphere_field(args.j_min, args.j_max)

    v = rng.uniform(args.j_min + 0.5, args.j_max - 0.5, size=args.queries)
    dirs = rng.normal(size=(args.queries, 3))
    dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
    got = reconstruct_spherical(fld, np.exp(v), dirs)
    want = gen.eval(np.exp(v), dirs)
    err = np.abs(got - want) / max(1.0, float(np.max(np.abs(want))))

    print(f"field: degree_max {args.degree_max}, p {args.p}, "
          f"spheres e^{args.j_min}..e^{args.j_max}, {args.queries} queries")
    print(f"{'log-radius shell':>18} {'queries':>8} {'max rel err':>12}")
    edges = np.arange(args.j_min, args.j_max + 1)
    for lo, hi in zip(edges[:-1], edges[1:]):
        mask = (v >= lo) & (v < hi)
        if mask.any():
            print(f"  [{lo:>3}, {hi:>3})      {int(mask.sum()):>8} "
                  f"{float(err[mask].max()):>12.3e}")


if __name__ == "__main__":
    main()
