"""Closed-form kernel against the integral-form quadrature on random draws."""

import argparse
import time

import numpy as np

from fracpme.kernel import ProblemParams, kernel_eval, kernel_quadrature


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--draws", type=int, default=200)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    errs = []
    t0 = time.perf_counter()
    for _ in range(args.draws):
        a, m = rng.uniform(0.2, 0.99), rng.uniform(1.0, 100.0)
        z = rng.uniform(0.0, 0.95)
        u = rng.uniform(0.0, z)
        p = ProblemParams(a, m)
        q = kernel_quadrature(p, z, u)
        errs.append(abs(kernel_eval(p, z, u) - q) / abs(q))
    errs = np.array(errs)
    print(f"{args.draws} draws in {time.perf_counter() - t0:.1f} s")
    print(f"relative error: max {errs.max():.2e}, median {np.median(errs):.2e}")


if __name__ == "__main__":
    main()
