"""Self-convergence of the smooth sound-wave run and of its N_nu drift."""

import argparse

from relgodunov.eos import GammaLawBarotrope
from relgodunov.fvsim import SimConfig, convergence_study


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--gamma", type=float, default=4 / 3)
    ap.add_argument("--resolutions", type=int, nargs="+", default=[100, 200, 400, 800])
    ap.add_argument("--amplitude", type=float, default=0.01)
    ap.add_argument("--t-end", type=float, default=1.0)
    args = ap.parse_args()

    params = dict(p0=1.0, v0=0.2, amplitude=args.amplitude, wavenumber=1, length=1.0)
    for order in (1, 2):
        cfg = SimConfig(GammaLawBarotrope(args.gamma), "sound-wave", params, t_end=args.t_end, order=order)
        st = convergence_study(cfg, args.resolutions)
        print(f"order {order}")
        print(f"  {'N':>6} {'L1(N, 2N)':>12} {'nu drift':>12}")
        for i, N in enumerate(st.resolutions):
            l1 = f"{st.l1_differences[i]:12.4e}" if i < len(st.l1_differences) else " " * 12
            print(f"  {N:6d} {l1} {st.nu_drifts[i]:12.4e}")
        print(f"  L1 order {st.l1_order:.3f}, drift order {st.drift_order:.3f}")


if __name__ == "__main__":
    main()
