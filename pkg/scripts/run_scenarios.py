"""Run the registered scenarios and write their outputs under one directory.

    python scripts/run_scenarios.py --out runs/ [names ...]
"""

import argparse
import os
import sys
import time

from wpme.cli import write_manifest
from wpme.scenarios import SCENARIOS, ScenarioError, run_scenario


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out", default="runs")
    ap.add_argument("names", nargs="*", default=sorted(SCENARIOS))
    args = ap.parse_args(argv)
    failed = 0
    for name in args.names:
        t0 = time.time()
        outdir = os.path.join(args.out, name)
        os.makedirs(outdir, exist_ok=True)
        try:
            res = run_scenario(name)
        except ScenarioError as err:
            print(f"{name:28s} inconclusive: {err}")
            failed += 1
            continue
        write_manifest(outdir, res.write(outdir))
        failed += res.verdict != "pass"
        print(f"{name:28s} {res.verdict:5s} {time.time() - t0:6.1f}s")
        for c in res.checks:
            print(f"    {'ok ' if c.passed else 'BAD'} {c.name}: {c.value:.4g} (limit {c.threshold:.4g})")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
