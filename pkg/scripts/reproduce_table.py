"""Empirical orders for the 20 reference cells next to the published values.

    python3 scripts/reproduce_table.py --n-base 3000 --out table.csv
"""

import argparse
import sys

from fracpme import io as fio
from fracpme.analysis import REFERENCE_TABLE, table_harness


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n-base", type=int, default=3000)
    ap.add_argument("--x", type=float, default=0.0)
    ap.add_argument("--start", choices=("asymptotic", "matched"), default="asymptotic")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--out")
    args = ap.parse_args()

    reports = table_harness(list(REFERENCE_TABLE), args.n_base, X=args.x,
                            start=args.start, threads=args.threads)
    print(f"{'alpha':>6} {'m':>7} {'order':>7} {'ref':>6} {'theory':>9} {'ref':>6} {'sec':>6}")
    for r in reports:
        print(f"{r.params.alpha:6.2f} {r.params.m:7g} {r.empirical_order:7.3f} "
              f"{r.empirical_order_reference:6.2f} {r.theoretical_order:9.3f} "
              f"{r.theoretical_order_reference:6.2f} {r.runtime_seconds:6.1f}"
              + (f"  {r.error}" if r.error else ""))
    if args.out:
        fio.write_text(args.out, fio.reports_text(reports, "csv"))
    return 0


if __name__ == "__main__":
    sys.exit(main())
