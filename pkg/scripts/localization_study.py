#!/usr/bin/env python3
"""Sweep the concentration scale and tabulate how fast the radial averages
approach the local operator on random trigonometric fields.

Example:
    python scripts/localization_study.py --n 1 --grid 64 --fields 5
    python scripts/localization_study.py --family bump --p inf
"""

import argparse
import math

import numpy as np

from nlops.fields import localization_table, random_trig_field
from nlops.operators import preset
from nlops.weights import annulus_family, bump, rescaled_family


def parse_args():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--operator", default="derivative",
                    help="operator preset name (derivative, gradient, divergence, curl)")
    ap.add_argument("--n", type=int, default=1, help="torus dimension")
    ap.add_argument("--grid", type=int, default=64, help="grid points per axis")
    ap.add_argument("--fields", type=int, default=5, help="number of random fields")
    ap.add_argument("--max-degree", type=int, default=3)
    ap.add_argument("--p", default="2", help="Lebesgue exponent (number or 'inf')")
    ap.add_argument("--family", choices=["annulus", "bump"], default="annulus")
    ap.add_argument("--eps", type=float, nargs="+",
                    default=[0.2, 0.1, 0.05, 0.025, 0.0125])
    ap.add_argument("--seed", type=int, default=0)
    return ap.parse_args()


def main():
    args = parse_args()
    op = preset(args.operator, args.n)
    p = math.inf if args.p == "inf" else float(args.p)
    if args.family == "annulus":
        family = annulus_family()
    else:
        family = rescaled_family(bump(args.n))

    rng = np.random.default_rng(args.seed)
    cache = {}
    # Average the per-eps errors over the random fields, then report the
    # observed halving ratio err(eps_{k+1}) / err(eps_k).
    totals = np.zeros(len(args.eps))
    for _ in range(args.fields):
        u = random_trig_field(args.n, args.grid, op.dim_v, rng,
                              max_degree=args.max_degree)
        rows = localization_table(op, u, family, p, args.eps, cache)
        totals += np.array([err for _, err in rows])
    means = totals / args.fields

    print(f"operator={op.name}  n={args.n}  N={args.grid}  "
          f"p={args.p}  family={args.family}  fields={args.fields}")
    print(f"{'eps':>10}  {'mean error':>14}  {'ratio':>8}")
    for k, (eps, err) in enumerate(zip(args.eps, means)):
        ratio = f"{means[k] / means[k - 1]:8.4f}" if k else " " * 8
        print(f"{eps:10.4f}  {err:14.6e}  {ratio}")


if __name__ == "__main__":
    main()
