#!/usr/bin/env python3
"""Scan the radial multiplier of the |x|^2-modified Gaussian weight and
compare it against the reciprocal-width Gaussian it is proportional to.

Double precision resolves the multiplier only while it stays above the
oscillatory-quadrature noise floor; past that the script switches to the
arbitrary-precision route.
"""

import argparse
import math

import numpy as np

from nlops.weights import (
    gaussian_modification,
    mu_hat_highprec,
    mu_hat_scan,
    normalize,
    positivity_scan,
)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sigma", type=float, nargs="+", default=[0.5, 1.0, 2.0])
    ap.add_argument("--xi-max", type=float, default=1.2)
    ap.add_argument("--points", type=int, default=13)
    ap.add_argument("--deep", action="store_true",
                    help="also print high-precision values near 1e-20 and 1e-30")
    args = ap.parse_args()

    for sigma in args.sigma:
        w = normalize(gaussian_modification(1, sigma))
        grid = np.linspace(0.0, args.xi_max, args.points)
        vals, errs = mu_hat_scan(w, grid)
        # mu_hat(xi) = c * exp(-2 pi^2 sigma^2 xi^2); the prefactor drops out
        # of the ratio below, which should come out flat.
        gauss = np.exp(-2.0 * math.pi**2 * sigma**2 * grid**2)
        ratio = vals / gauss

        report = positivity_scan(w, grid[1:])
        print(f"sigma = {sigma}  ({report.verdict})")
        print(f"{'xi':>8}  {'mu_hat':>14}  {'err est':>10}  {'ratio':>12}")
        for xi, v, e, r in zip(grid, vals, errs, ratio):
            print(f"{xi:8.3f}  {v:14.6e}  {e:10.2e}  {r:12.8f}")

        if args.deep:
            import mpmath as mp

            # pick frequencies where the predicted value sits at a fixed
            # decade, so the working precision needed is the same for all
            # widths: exp(-2 pi^2 sigma^2 xi^2) = 10^-decade
            for decade in (20, 30):
                xi = math.sqrt(decade * math.log(10.0) / (2.0 * math.pi**2 * sigma**2))
                dps = 30 + decade
                hv = mu_hat_highprec(w, xi, dps=dps)
                with mp.workdps(dps):
                    pred = mp.e ** -(2 * mp.pi**2 * mp.mpf(sigma) ** 2 * mp.mpf(xi) ** 2)
                    rel = float(hv / pred - 1)
                print(f"{xi:8.3f}  {mp.nstr(hv, 6):>14}  (mpmath, dps {dps}, "
                      f"rel dev {rel:.2e})")
        print()


if __name__ == "__main__":
    main()
