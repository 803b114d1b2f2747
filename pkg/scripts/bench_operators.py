#!/usr/bin/env python3
"""Time the multiplier and quadrature routes across grid sizes.

The direct routes exist as oracles, not as production paths, so the point
of this table is to document how much slower they are and how the gap
scales with N.
"""

import argparse
import time

import numpy as np

from nlops import fields
from nlops.operators import preset
from nlops.weights import annulus, bump, rescaled_family


def clock(fn, repeats):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--operator", default="gradient")
    ap.add_argument("--n", type=int, default=2)
    ap.add_argument("--grids", type=int, nargs="+", default=[16, 32, 64])
    ap.add_argument("--s", type=float, default=0.1)
    ap.add_argument("--eps", type=float, default=0.1, help="annulus scale")
    ap.add_argument("--repeats", type=int, default=3)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    op = preset(args.operator, args.n)
    # the annulus profile is one-dimensional; in higher dimension fall back
    # to the rescaled bump at the same scale
    w = annulus(args.eps) if args.n == 1 else rescaled_family(bump(args.n))(args.eps)
    rng = np.random.default_rng(args.seed)

    cols = ["local", "sph spectral", "sph direct", "rad spectral",
            "rad cached", "rad direct"]
    print(f"operator={op.name}  n={args.n}  s={args.s}  eps={args.eps}  "
          f"best of {args.repeats}")
    print(f"{'N':>6}  " + "  ".join(f"{c:>12}" for c in cols))
    for N in args.grids:
        u = fields.random_trig_field(args.n, N, op.dim_v, rng,
                                     max_degree=min(4, N // 2 - 1))
        cache = {}
        row = [
            clock(lambda: fields.apply_local(op, u), args.repeats),
            clock(lambda: fields.apply_spherical_spectral(op, u, args.s),
                  args.repeats),
            clock(lambda: fields.apply_spherical_direct(op, u, args.s),
                  args.repeats),
            # First radial call pays the Bessel quadrature per frequency
            # shell; the cached call reuses it.
            clock(lambda: fields.apply_radial_spectral(op, u, w, {}), 1),
            clock(lambda: fields.apply_radial_spectral(op, u, w, cache),
                  args.repeats),
            clock(lambda: fields.apply_radial_direct(op, u, w), 1),
        ]
        print(f"{N:>6}  " + "  ".join(f"{t:12.4f}" for t in row))


if __name__ == "__main__":
    main()
