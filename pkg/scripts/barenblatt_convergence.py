"""Relative L1 error against the Barenblatt profile under grid refinement.

    python scripts/barenblatt_convergence.py --m 2 --cells 200 400 800 1600
"""

import argparse

import numpy as np

from wpme.domain import Domain1D
from wpme.solver import Datum, PMEProblem, TimeControls, barenblatt_profile, solve
from wpme.weights import lebesgue


def l1_error(m, M, half_width=8.0, t0=1.0, T=1.0):
    L = 2 * half_width
    p = PMEProblem(m, "dirichlet", lebesgue(), lebesgue(), Domain1D(-half_width, half_width), Datum("barenblatt", t0=t0), controls=TimeControls(dt_max=0.5 * L / M))
    tr = solve(p, M, [T])
    # the datum is the profile at t0, so solver time T is profile time t0 + T
    ex = barenblatt_profile(tr.grid.centers, t0 + T, m)
    return float(tr.grid.masses @ np.abs(tr.u[-1] - ex) / (tr.grid.masses @ np.abs(ex)))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--m", type=float, default=2.0)
    ap.add_argument("--cells", type=int, nargs="+", default=[200, 400, 800, 1600])
    args = ap.parse_args(argv)
    prev = None
    print(f"{'M':>6s} {'rel L1 error':>14s} {'ratio':>7s}")
    for M in args.cells:
        e = l1_error(args.m, M)
        print(f"{M:6d} {e:14.4e} {'' if prev is None else f'{prev / e:7.2f}'}")
        prev = e


if __name__ == "__main__":
    main()
