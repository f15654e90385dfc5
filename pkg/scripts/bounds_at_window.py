"""Exact d(t) against the spectral and Wilson bounds at t* + c w.

w = n/k for k = 1 families, w = 1 for k = n families.

    python scripts/bounds_at_window.py --n 400 --k 1
"""

import argparse
import math

from kneser_mix import bounds
from kneser_mix.engine import TVProfile, f_moments
from kneser_mix.model import KneserParams


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=400)
    ap.add_argument("--k", type=int, default=1)
    args = ap.parse_args()
    p = KneserParams(args.n, args.k)
    w = 1.0 if p.k >= p.n else p.window
    grid = [-4, -3, -2, -1, -0.5, 0, 0.5, 1, 2, 3, 4]
    times = [max(0, math.floor(p.t_star + c * w)) for c in grid]
    prof = TVProfile(p)
    mom = f_moments(p, max(times))
    table = bounds.spectrum(p)
    print(f"K({p.ground},{p.n})  t* = {p.t_star:.3f}  w = {w:g}")
    print(f"{'c':>6} {'t':>6} {'wilson_an':>10} {'wilson_ex':>10} {'d_exact':>10} {'spectral':>10} {'g_bound':>10}")
    for c, t in zip(grid, times):
        gb = bounds.g_bound(p, t)
        print(
            f"{c:>6} {t:>6} {bounds.wilson_lower_analytic(p, t):>10.5f} "
            f"{bounds.wilson_lower_exact(p, mom.mean[t], mom.var[t]):>10.5f} {prof[t]:>10.5f} "
            f"{bounds.spectral_upper(p, t, table):>10.5f} {'n/a' if gb is None else f'{gb:.5f}':>10}"
        )


if __name__ == "__main__":
    main()
