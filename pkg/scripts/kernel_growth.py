#!/usr/bin/env python3
"""Kernel class counts per depth for a sequence document, one CSV column per N."""

import argparse
import warnings

from asymauto.kernel.clustering import cluster_kernel
from asymauto.seqcore import SequenceSpec
from asymauto.stats.export import to_csv


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("spec", nargs="?", default='{"kind": "theta_frequency", "params": {"theta": "1/2"}}',
                    help="inline JSON sequence document")
    ap.add_argument("--depth", type=int, default=6)
    ap.add_argument("--k", type=int, default=2)
    ap.add_argument("--eps", type=float, default=0.05)
    ap.add_argument("--n", type=int, nargs="*", default=[1 << 16, 1 << 18, 1 << 20])
    ap.add_argument("--workers", type=int, default=1)
    args = ap.parse_args()
    a = SequenceSpec.parse(args.spec).build()
    cols = []
    for N in args.n:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            cols.append(cluster_kernel(a, args.k, args.depth, N, args.eps, workers=args.workers).per_depth)
    rows = [(d,) + tuple(c[d][1] for c in cols) for d in range(args.depth + 1)]
    print(to_csv(["depth"] + [f"N={N}" for N in args.n], rows, [args.spec]), end="")


if __name__ == "__main__":
    main()
