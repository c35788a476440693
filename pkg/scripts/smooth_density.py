#!/usr/bin/env python3
"""Smooth-interval diagnostics.

Part 1: density of n < N with a_n != a_{n+1} or a_n != a_{2n} for the
smooth parity sequence. Part 2: the log-mass share of beta = 0 intervals.
"""

import argparse

import numpy as np

from asymauto.kernel.discrepancy import default_ladder
from asymauto.seqcore import gamma_schedule, smooth_parity_sequence
from asymauto.stats import smooth_log_mass
from asymauto.stats.export import to_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=10**6)
    ap.add_argument("--levels", type=int, default=3, help="length of the gamma schedule")
    ap.add_argument("--mass-k", type=int, nargs="*", default=[10, 100, 300, 1000, 2000, 4000])
    args = ap.parse_args()
    sched = gamma_schedule(args.levels)
    a = smooth_parity_sequence(sched)
    c = a.codes_range(2 * args.n + 1)
    n = np.arange(args.n)
    cs = np.concatenate([[0], np.cumsum((c[n] != c[n + 1]) | (c[n] != c[2 * n]))])
    rows = [(N, int(cs[N]) / N) for N in default_ladder(args.n)]
    print(to_csv(["N", "violation_density"], rows, [f"gamma={list(sched.gamma)}"]), end="")
    print()
    rows = []
    for K in args.mass_k:
        m = smooth_log_mass(0, K)
        rows.append((K, m.H_K.bit_length(), m.ratio))
    print(to_csv(["K", "log2_H_K", "beta0_log_share"], rows), end="")


if __name__ == "__main__":
    main()
