"""Run the integral criteria over every catalog pair and print a table.

    python scripts/audit_catalog.py [--discrete] [--csv out.csv]
"""

import argparse
import csv
import sys
import time

from wpme.catalog import entries
from wpme.poincare import audit


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--discrete", action="store_true", help="also estimate discrete constants (slow)")
    ap.add_argument("--csv", help="write the table to this file")
    args = ap.parse_args(argv)

    rows = []
    mismatches = 0
    for e in entries():
        t0 = time.time()
        rep = audit(e.nu, e.mu, e.domain, kinds=(e.kind,), discrete=args.discrete)
        got = rep.verdicts[e.kind]
        const = rep.B_L if e.kind == "dirichlet" else rep.K_L
        mismatches += got != e.expected
        rows.append([e.name, e.kind, e.expected, got, const, rep.C_P if args.discrete else "", f"{time.time() - t0:.2f}"])
        print(f"{'ok ' if got == e.expected else 'BAD'} {e.name:48s} {got:12s} {time.time() - t0:6.2f}s")
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            w = csv.writer(fh)
            w.writerow(["name", "kind", "expected", "verdict", "left_constant", "discrete_C_P", "seconds"])
            w.writerows(rows)
    print(f"{len(rows)} entries, {mismatches} mismatches")
    return 1 if mismatches else 0


if __name__ == "__main__":
    sys.exit(main())
