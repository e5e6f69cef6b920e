"""Command-line front end.

Exit codes: 0 success, 1 numerical failure, 2 validation or usage error,
3 degenerate order estimate.
"""

from __future__ import annotations

import argparse
import logging
import sys

from . import io as fio
from .analysis import REFERENCE_TABLE, DegenerateOrderError, empirical_order_study, table_harness
from .kernel import ProblemParams, kernel_eval, kernel_quadrature
from .reconstruct import evaluate_u, profile, wetting_front
from .solver import solve_midpoint
from .theory import (
    bounds_coefficients,
    kernel_bound_constants,
    midpoint_admissible,
    theoretical_order,
)

EXIT_NUMERICAL = 1
EXIT_USAGE = 2
EXIT_DEGENERATE = 3


class _UsageError(ValueError):
    pass


def _params(args) -> ProblemParams:
    return ProblemParams(args.alpha, args.m)


def _emit(text: str, out: str | None) -> None:
    if out:
        fio.write_text(out, text)
    else:
        sys.stdout.write(text)


def _point(raw: str):
    if raw == "max":
        return raw
    try:
        return float(raw)
    except ValueError:
        raise argparse.ArgumentTypeError(f"point must be a number or 'max', got {raw!r}")


def cmd_solve(args) -> int:
    params = _params(args)
    if args.n < 4:
        raise _UsageError(f"--n must be >= 4, got {args.n}")
    sol = solve_midpoint(params, args.n, start=args.start)
    _emit(fio.solution_text(sol, args.format), args.out)
    summary = f"y(1) = {fio.fmt(sol.values[-1])}  eta* = {fio.fmt(wetting_front(sol))}\n"
    (sys.stdout if args.out else sys.stderr).write(summary)
    return 0


def cmd_order(args) -> int:
    params = _params(args)
    if args.n_base < 8:
        raise _UsageError(f"--n-base must be >= 8, got {args.n_base}")
    rep = empirical_order_study(params, args.n_base, args.point, args.x, args.start)
    text = fio.report_json(rep) if args.format == "json" else fio.reports_text([rep], "csv")
    _emit(text, args.out)
    print(
        f"alpha={params.alpha} m={params.m} N={args.n_base}: empirical order "
        f"{rep.empirical_order:.4f}, theoretical (X={args.x}) {rep.theoretical_order:.4f}",
        file=sys.stdout if args.out else sys.stderr,
    )
    return 0


def cmd_table(args) -> int:
    cfg = {"cells": list(REFERENCE_TABLE)}
    if args.spec:
        try:
            with open(args.spec) as fh:
                parsed = fio.parse_spec(fh.read())
        except OSError as exc:
            raise _UsageError(f"cannot read spec file: {exc}")
        if not parsed["cells"]:
            raise _UsageError("spec file lists no cells")
        cfg.update(parsed)
    n_base = cfg.get("n_base", args.n_base)
    X = cfg.get("x", args.x)
    reports = table_harness(
        cfg["cells"],
        n_base,
        X=X,
        evaluation_point=cfg.get("point", args.point),
        start=cfg.get("start", args.start),
        threads=cfg.get("threads", args.threads),
    )
    _emit(fio.reports_text(reports, args.format), args.out)
    if reports and all(r.error for r in reports):
        return EXIT_NUMERICAL
    return 0


def cmd_kernel(args) -> int:
    params = _params(args)
    k = kernel_eval(params, args.z, args.u)
    print(f"K = {fio.fmt(k)}")
    if args.oracle:
        o = kernel_quadrature(params, args.z, args.u)
        dev = abs(k - o) / max(abs(o), 1e-12)
        print(f"oracle = {fio.fmt(o)}")
        print(f"relative deviation = {dev:.3e}")
    return 0


def cmd_bounds(args) -> int:
    params = _params(args)
    b = bounds_coefficients(params)
    kb = kernel_bound_constants(params, args.x)
    adm = midpoint_admissible(params, kb)
    print(f"C1 = {fio.fmt(b.C1)}")
    print(f"C2 = {fio.fmt(b.C2)}")
    print(f"kappa = {fio.fmt(b.kappa)}")
    print(f"D(X={args.x}) = {fio.fmt(kb.D)}")
    print(f"A = {fio.fmt(kb.A)}")
    print(f"theoretical order = {fio.fmt(theoretical_order(params, kb))}")
    verdict = "admissible" if adm.admissible else "not admissible"
    print(f"midpoint: {verdict} (m > 2 - alpha: {adm.exponent_ok}; A < {fio.fmt(adm.threshold)}: {adm.A < adm.threshold})")
    return 0


def cmd_reconstruct(args) -> int:
    params = _params(args)
    if args.n < 4:
        raise _UsageError(f"--n must be >= 4, got {args.n}")
    for _, t in args.sample or ():
        if t <= 0:
            raise _UsageError(f"sample time must be positive, got {t}")
    prof = profile(solve_midpoint(params, args.n, start=args.start))
    print(f"eta* = {fio.fmt(prof.eta_star)}")
    if args.out:
        fio.write_text(args.out, fio.profile_text(prof))
    if args.sample:
        rows = [(x, t, float(evaluate_u(prof, x, t))) for x, t in args.sample]
        text = fio.u_samples_text(rows)
        _emit(text, args.u_out)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="fracpme", description=__doc__.splitlines()[0])
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def with_params(sp):
        sp.add_argument("--alpha", type=float, required=True, help="order, 0 < alpha < 1")
        sp.add_argument("--m", type=float, required=True, help="exponent, m > 1")

    def with_output(sp):
        sp.add_argument("--out", help="output file (default: stdout)")
        sp.add_argument("--format", choices=("csv", "json"), default="csv")

    def with_start(sp):
        sp.add_argument("--start", choices=("asymptotic", "matched"), default="asymptotic",
                        help="starting-value coefficient")

    sp = sub.add_parser("solve", help="midpoint solve on a uniform grid")
    with_params(sp)
    sp.add_argument("--n", type=int, required=True)
    with_start(sp)
    with_output(sp)
    sp.set_defaults(func=cmd_solve)

    sp = sub.add_parser("order", help="empirical order from N, 2N, 4N")
    with_params(sp)
    sp.add_argument("--n-base", type=int, required=True)
    sp.add_argument("--point", type=_point, default=1.0, help="node z or 'max'")
    sp.add_argument("--x", type=float, default=0.0, help="cutoff X for the theoretical order")
    with_start(sp)
    with_output(sp)
    sp.set_defaults(func=cmd_order)

    sp = sub.add_parser("table", help="batch of order studies (default: reference cells)")
    sp.add_argument("--spec", help="key-value file: 'cell = alpha,m' lines, n_base, x")
    sp.add_argument("--n-base", type=int, default=3000)
    sp.add_argument("--point", type=_point, default=1.0)
    sp.add_argument("--x", type=float, default=0.0)
    sp.add_argument("--threads", type=int, default=1)
    with_start(sp)
    with_output(sp)
    sp.set_defaults(func=cmd_table)

    sp = sub.add_parser("kernel", help="evaluate K(z, u)")
    with_params(sp)
    sp.add_argument("--z", type=float, required=True)
    sp.add_argument("--u", type=float, required=True)
    sp.add_argument("--oracle", action="store_true", help="also print the quadrature value")
    sp.set_defaults(func=cmd_kernel)

    sp = sub.add_parser("bounds", help="C1, C2, D, A, theoretical order, admissibility")
    with_params(sp)
    sp.add_argument("--x", type=float, default=0.0)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("reconstruct", help="wetting front and profile U(eta)")
    with_params(sp)
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--out", help="profile CSV (z,y,eta,U)")
    sp.add_argument("--sample", nargs=2, type=float, action="append", metavar=("X", "T"),
                    help="sample u(x, t); repeatable")
    sp.add_argument("--u-out", help="CSV for samples (x,t,u); default stdout")
    with_start(sp)
    sp.set_defaults(func=cmd_reconstruct)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except DegenerateOrderError as exc:
        print(f"error: degenerate order estimate: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except ArithmeticError as exc:
        print(f"error: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
