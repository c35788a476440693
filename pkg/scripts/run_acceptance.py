#!/usr/bin/env python3
"""Run the acceptance checks and write one JSON report per criterion."""

import argparse
import sys

from asymauto import acceptance


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default="acceptance_reports", help="report directory")
    ap.add_argument("--workers", type=int, default=1)
    ap.add_argument("--only", type=int, nargs="*", help="criterion numbers (1-11); skips the determinism pass")
    args = ap.parse_args()
    if args.only:
        results = [acceptance.run_criterion(i, args.workers) for i in args.only]
        for r in results:
            print(r.line(), flush=True)
        acceptance.write_reports(results, args.out)
    else:
        results = acceptance.run_all(args.workers, args.out)
    print(f"{sum(r.passed for r in results)}/{len(results)} passed; reports in {args.out}/")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
