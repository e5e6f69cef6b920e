"""Compare the computed y_n / z_n^kappa with the C1, C2 bound coefficients.

Also prints C1 with the exponent 1/m in place of 1/(m+1), which is what a
leading-order balance of y^(m+1) against the kernel integral gives.
"""

import argparse

import numpy as np

from fracpme.kernel import ProblemParams
from fracpme.solver import solve_midpoint
from fracpme.theory import asymptotic_coefficient, bounds_coefficients, matched_coefficient


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--cell", nargs=2, type=float, action="append", metavar=("ALPHA", "M"))
    ap.add_argument("--n", type=int, default=2000)
    ap.add_argument("--start", choices=("asymptotic", "matched"), default="matched")
    args = ap.parse_args()
    cells = args.cell or [(0.8, 10), (0.6, 1), (0.99, 10), (0.5, 100)]

    for a, m in cells:
        p = ProblemParams(a, m)
        b = bounds_coefficients(p)
        sol = solve_midpoint(p, args.n, start=args.start)
        z, y = sol.z[1:], sol.values[1:]
        ratio = y / z**p.kappa
        c1_alt = b.C1 ** ((m + 1) / m)
        print(f"alpha={a:g} m={m:g}")
        print(f"  C1 {b.C1:.6f}  C1 (1/m) {c1_alt:.6f}  C2 {b.C2:.6f}")
        print(f"  start coeff printed {asymptotic_coefficient(p):.6f}  matched {matched_coefficient(p):.6f}")
        print(f"  y/z^kappa in [{ratio.min():.6f}, {ratio.max():.6f}]")
        print(f"  min y - C1 z^kappa {np.min(y - b.lower(z)):+.5f}  max y - C2 z^kappa {np.max(y - b.upper(z)):+.5f}")


if __name__ == "__main__":
    main()
