"""Monte Carlo f_t moments against the exact lumped evolution.

    python scripts/mc_crosscheck.py --n 100 --k 1 --walks 100000 --seed 7
"""

import argparse
import math

from kneser_mix import montecarlo as mc
from kneser_mix.engine import f_moments
from kneser_mix.model import KneserParams


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--n", type=int, default=100)
    ap.add_argument("--k", type=int, default=1)
    ap.add_argument("--walks", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--mode", choices=["lumped", "explicit"], default="lumped")
    args = ap.parse_args()
    p = KneserParams(args.n, args.k)
    horizon = math.ceil(2 * p.t_star)
    est = mc.estimate_f_moments(mc.SimConfig(p, args.walks, horizon, args.seed, args.mode))
    exact = f_moments(p, horizon)
    z_mean = [abs(e.mean - exact.mean[e.t]) / e.stderr for e in est if e.stderr > 0]
    z_var = [abs(e.var - exact.var[e.t]) / e.var_stderr for e in est if e.var_stderr > 0]
    print(f"horizon {horizon}, {args.walks} walks, mode {args.mode}")
    print(f"max |z| mean {max(z_mean):.3f}, variance {max(z_var):.3f}")


if __name__ == "__main__":
    main()
