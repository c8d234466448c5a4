"""Definiteness of the four-field symmetrizer as a function of the contraction covector.

For a rest state the symmetrizer stays definite as long as
|T_x / T_0| < 1 / c_s.  Causal closures (c_s <= 1) are definite for every
timelike T; an acausal closure is not.  The script scans T = (-1, r, 0, 0)
and reports the first ratio r at which definiteness is lost.
"""

import argparse
import math

import numpy as np

from relgodunov.eos import GammaLawBarotrope
from relgodunov.godunov import symmetrizers4, to_godunov4
from relgodunov.index import IndexFunction


def main():
    ap = argparse.ArgumentParser(description=__doc__.split("\n")[0])
    ap.add_argument("--gammas", type=float, nargs="+", default=[4 / 3, 1.5, 2.0, 2.5, 3.0])
    ap.add_argument("--points", type=int, default=2000)
    args = ap.parse_args()

    ratios = np.linspace(0.0, 0.9995, args.points)
    Ts = [np.array([-1.0, r, 0.0, 0.0]) for r in ratios]
    print(f"{'gamma':>6} {'c_s':>8} {'1/c_s':>8} {'first indefinite r':>20}")
    for g in args.gammas:
        eos = GammaLawBarotrope(g, strict=False)
        idx = IndexFunction(eos)
        sym = symmetrizers4(idx, to_godunov4(idx, 1.0, np.array([1.0, 0, 0, 0])), Ts)
        bad = [r for r, s in zip(ratios, sym) if not s.definite]
        cs = math.sqrt(g - 1.0)
        first = f"{bad[0]:.4f}" if bad else "none"
        print(f"{g:6.3f} {cs:8.4f} {1 / cs:8.4f} {first:>20}")


if __name__ == "__main__":
    main()
