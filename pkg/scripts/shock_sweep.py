"""Weak-shock scaling of nu production for several gamma-law barotropes.

Prints the fitted log-log slope per gamma and, with --csv, the raw
(gamma, amplitude, production) table.
"""

import argparse

import numpy as np

from relgodunov.eos import GammaLawBarotrope
from relgodunov.index import IndexFunction
from relgodunov.shock import nu_production, rh_solve_barotropic, weak_shock_exponent


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--gammas", type=float, nargs="+", default=[1.1, 4 / 3, 1.5, 5 / 3, 1.9])
    ap.add_argument("--p-minus", type=float, default=1.0)
    ap.add_argument("--points", type=int, default=20)
    ap.add_argument("--csv", default=None, help="write the production table here")
    args = ap.parse_args()

    amps = np.geomspace(1e-3, 1e-1, args.points)
    rows = []
    print(f"{'gamma':>8} {'slope':>8} {'P(eps=0.1)':>12}")
    for g in args.gammas:
        eos = GammaLawBarotrope(g)
        idx = IndexFunction(eos)
        slope = weak_shock_exponent(eos, idx, args.p_minus, amps)
        prods = [nu_production(eos, idx, rh_solve_barotropic(eos, idx, args.p_minus, args.p_minus + e)) for e in amps]
        rows += [(g, e, P) for e, P in zip(amps, prods)]
        print(f"{g:8.4f} {slope:8.4f} {prods[-1]:12.4e}")
    if args.csv:
        np.savetxt(args.csv, rows, delimiter=",", header="gamma,amplitude,production", comments="", fmt="%.17g")


if __name__ == "__main__":
    main()
