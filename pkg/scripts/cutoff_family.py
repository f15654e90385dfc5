"""Cutoff diagnostics for a size-increasing Kneser family.

    python scripts/cutoff_family.py --k 1 --n 50 100 200 400 --eps 0.05
"""

import argparse

import numpy as np

from kneser_mix import analysis
from kneser_mix.engine import TVProfile
from kneser_mix.model import KneserParams


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--n", type=int, nargs="+", default=[50, 100, 200, 400])
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--same-k", action="store_true", help="use k = n for every member")
    args = ap.parse_args()

    ps = [KneserParams(n, n if args.same_k else args.k) for n in args.n]
    print(f"{'n':>6} {'k':>6} {'t*':>10} {'n/k':>8} {'t_mix(eps)':>11} {'t_mix(1-eps)':>13} {'ratio':>8}")
    for p, lo, hi, ratio in analysis.cutoff_diagnostic(ps, args.eps):
        print(f"{p.n:>6} {p.k:>6} {p.t_star:>10.2f} {p.window:>8.2f} {lo:>11} {hi:>13} {ratio:>8.4f}")

    cs = np.arange(-3, 3.01, 0.5)
    print("\nd(t* + c n/k)")
    print("     c " + " ".join(f"{p.n:>8}" for p in ps))
    curves = [analysis.rescaled_profile(p, cs, TVProfile(p)) for p in ps]
    for i, c in enumerate(cs):
        print(f"{c:>6.2f} " + " ".join(f"{cur[i]:>8.4f}" for cur in curves))


if __name__ == "__main__":
    main()
