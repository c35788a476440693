#!/usr/bin/env python3
"""Empirical frequency of 1 in the theta-frequency sequence along N = 2^e.

Prints CSV rows (selector, e, frequency, gap to theta). At reachable
horizons the canonical selector overshoots theta and the terminal one
undershoots. Neither gap is small before N is astronomically large.
"""

import argparse

from asymauto.reals import Real
from asymauto.seqcore import theta_frequency_sequence
from asymauto.stats import freq
from asymauto.stats.export import to_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--theta", default="sqrt(2)/2")
    ap.add_argument("--emin", type=int, default=12)
    ap.add_argument("--emax", type=int, default=22)
    ap.add_argument("--step", type=int, default=2)
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    target = float(Real.parse(args.theta))
    cps = [1 << e for e in range(args.emin, args.emax + 1, args.step)]
    rows = []
    for sel in ("canonical", "terminal"):
        est = freq(theta_frequency_sequence(args.theta, sel), [1], cps[-1], cps, workers=args.workers)
        for c, d in zip(cps, est.densities):
            rows.append((sel, c.bit_length() - 1, d, d - target))
    print(to_csv(["selector", "log2_N", "frequency", "gap"], rows, [f"theta={args.theta}"]), end="")


if __name__ == "__main__":
    main()
