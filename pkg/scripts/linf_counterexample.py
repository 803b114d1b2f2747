#!/usr/bin/env python3
"""Measure the sup-norm defect of ball averages of the sign density.

The averaged density stays strictly below the carrier near the jump no
matter how small the averaging radius is, so the sup-norm gap has a
positive floor (1 - ln 2).  This script prints the gap for a list of
radii together with the interior profile.
"""

import argparse
import math

from nlops.measures import linf_gap, linf_gap_closed_form


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--eps", type=float, nargs="+", default=[0.1, 0.05, 0.01])
    ap.add_argument("--probes", type=int, default=400,
                    help="probe points per sweep")
    args = ap.parse_args()

    floor = 1.0 - math.log(2.0)
    print(f"sup-norm gap of the averaged sign density (floor = {floor:.10f})")
    print(f"{'eps':>8}  {'gap':>14}  {'gap - floor':>12}")
    for eps in args.eps:
        g = linf_gap(eps, probe_count=args.probes)
        print(f"{eps:8.4f}  {g:14.10f}  {g - floor:12.4e}")

    # Interior profile t -> (t/eps) ln 2 on |t| <= eps for the smallest radius.
    eps = min(args.eps)
    print(f"\ninterior profile at eps = {eps}")
    print(f"{'t/eps':>8}  {'average':>14}")
    for frac in (-1.0, -0.5, 0.0, 0.5, 1.0):
        t = frac * eps
        print(f"{frac:8.2f}  {linf_gap_closed_form(eps, t):14.10f}")


if __name__ == "__main__":
    main()
