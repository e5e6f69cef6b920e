"""Empirical convergence orders and bound checks for the midpoint scheme."""

from __future__ import annotations

import logging
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Sequence, Union

import numpy as np

from .kernel import ProblemParams
from .solver import DiscreteSolution, solve_midpoint
from .theory import SolutionBounds, kernel_bound_constants, theoretical_order

logger = logging.getLogger(__name__)

__all__ = [
    "REFERENCE_TABLE",
    "BoundViolation",
    "DegenerateOrderError",
    "OrderReport",
    "aitken_order",
    "bound_check",
    "empirical_order_study",
    "table_harness",
]

EvaluationPoint = Union[float, str]

# Published reference runs at N = 3000: (alpha, m) -> (theoretical, empirical).
REFERENCE_TABLE: dict[tuple[float, float], tuple[float, float]] = {
    (0.1, 1463): (0.0, 0.83),
    (0.1, 10000): (0.09, 0.98),
    (0.2, 252): (0.0, 0.64),
    (0.2, 1000): (0.15, 0.94),
    (0.3, 80): (0.0, 0.58),
    (0.3, 100): (0.06, 0.63),
    (0.4, 33): (0.0, 0.60),
    (0.4, 100): (0.27, 0.79),
    (0.5, 15): (0.0, 0.66),
    (0.5, 100): (0.42, 0.88),
    (0.6, 1): (0.16, 1.01),
    (0.6, 10): (0.55, 0.93),
    (0.7, 1): (0.44, 0.90),
    (0.7, 10): (0.66, 0.95),
    (0.8, 1): (0.68, 0.87),
    (0.8, 10): (0.78, 0.97),
    (0.9, 1): (0.88, 0.85),
    (0.9, 10): (0.77, 0.97),
    (0.99, 1): (1.04, 0.83),
    (0.99, 10): (1.08, 1.00),
}

_TINY = 1e-300


class DegenerateOrderError(ArithmeticError):
    """Successive differences vanish, so no order can be extracted."""


@dataclass
class OrderReport:
    params: ProblemParams
    N_base: int
    evaluation_point: EvaluationPoint
    empirical_order: float = math.nan
    theoretical_order: float = math.nan
    diffs: tuple[float, float] = (math.nan, math.nan)
    runtime_seconds: float = 0.0
    X: float = 0.0
    error: str | None = None

    @property
    def theoretical_order_reference(self) -> float:
        ref = REFERENCE_TABLE.get((self.params.alpha, self.params.m))
        return ref[0] if ref else math.nan

    @property
    def empirical_order_reference(self) -> float:
        ref = REFERENCE_TABLE.get((self.params.alpha, self.params.m))
        return ref[1] if ref else math.nan

    def as_record(self) -> dict:
        return {
            "alpha": self.params.alpha,
            "m": self.params.m,
            "N_base": self.N_base,
            "evaluation_point": self.evaluation_point,
            "empirical_order": self.empirical_order,
            "theoretical_order_computed": self.theoretical_order,
            "theoretical_order_paper": self.theoretical_order_reference,
            "runtime_seconds": self.runtime_seconds,
        }


def aitken_order(v_n: float, v_2n: float, v_4n: float) -> float:
    """Order ``log2(|v_N - v_2N| / |v_2N - v_4N|)`` from three nested grids."""
    return _order_from_diffs(abs(v_n - v_2n), abs(v_2n - v_4n))


def _order_from_diffs(d1: float, d2: float) -> float:
    if d2 < _TINY:
        raise DegenerateOrderError(f"|v_2N - v_4N| = {d2!r} is zero to working precision")
    if d1 < _TINY:
        raise DegenerateOrderError("|v_N - v_2N| vanishes; the estimate would be -inf")
    return math.log2(d1 / d2)


def _differences(sols: Sequence[DiscreteSolution], point: EvaluationPoint) -> tuple[float, float]:
    coarse, mid, fine = sols
    if point == "max":
        a = coarse.values
        b = mid.values[::2]
        c = fine.values[::4]
        return float(np.max(np.abs(a - b))), float(np.max(np.abs(b - c)))
    z = float(point)
    v = [s.value_at(z) for s in sols]
    return abs(v[0] - v[1]), abs(v[1] - v[2])


def empirical_order_study(
    params: ProblemParams,
    N_base: int,
    evaluation_point: EvaluationPoint = 1.0,
    X: float = 0.0,
    start: str = "asymptotic",
) -> OrderReport:
    """Solve on N, 2N and 4N and estimate the order at ``evaluation_point``.

    ``evaluation_point`` is a node of the coarsest grid or ``"max"`` for the
    maximum norm over the coarse nodes.
    """
    if N_base < 8:
        raise ValueError(f"N_base must be >= 8, got {N_base}")
    if evaluation_point != "max":
        z = float(evaluation_point)
        if not 0.0 < z <= 1.0 or abs(round(z * N_base) - z * N_base) > 1e-9:
            raise ValueError(f"evaluation point {z} is not a node of the N={N_base} grid in (0, 1]")
    t0 = time.perf_counter()
    sols = [solve_midpoint(params, N_base * k, start=start) for k in (1, 2, 4)]
    d1, d2 = _differences(sols, evaluation_point)
    theo = theoretical_order(params, kernel_bound_constants(params, X))
    order = _order_from_diffs(d1, d2)
    return OrderReport(
        params=params,
        N_base=N_base,
        evaluation_point=evaluation_point,
        empirical_order=order,
        theoretical_order=theo,
        diffs=(d1, d2),
        runtime_seconds=time.perf_counter() - t0,
        X=X,
    )


def _run_cell(cell, N_base, X, evaluation_point, start) -> OrderReport:
    params = ProblemParams(*cell)
    try:
        return empirical_order_study(params, N_base, evaluation_point, X, start)
    except (ArithmeticError, ValueError) as exc:
        logger.warning("cell alpha=%s m=%s failed: %s", params.alpha, params.m, exc)
        return OrderReport(params=params, N_base=N_base, evaluation_point=evaluation_point,
                           X=X, error=f"{type(exc).__name__}: {exc}")


def table_harness(
    cells: Iterable[tuple[float, float]],
    N_base: int,
    X: float = 0.0,
    evaluation_point: EvaluationPoint = 1.0,
    start: str = "asymptotic",
    threads: int = 1,
) -> list[OrderReport]:
    """One :class:`OrderReport` per ``(alpha, m)`` cell, sorted by ``(alpha, m)``.

    Failing cells are reported with ``error`` set instead of aborting the batch.
    Invalid ``(alpha, m)`` pairs raise before anything is solved.
    """
    cells = sorted((float(a), float(m)) for a, m in cells)
    for c in cells:
        ProblemParams(*c)
    args = (N_base, X, evaluation_point, start)
    if threads <= 1:
        return [_run_cell(c, *args) for c in cells]
    # the compiled kernel releases the GIL, so threads overlap the solves
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(lambda c: _run_cell(c, *args), cells))


@dataclass(frozen=True)
class BoundViolation:
    n: int
    z: float
    y: float
    lower: float
    upper: float

    @property
    def kind(self) -> str:
        return "below" if self.y < self.lower else "above"


def bound_check(
    solution: DiscreteSolution, bounds: SolutionBounds, tolerance: float
) -> list[BoundViolation]:
    """Nodes with ``y_n < C1 z_n^kappa - tol`` or ``y_n > C2 z_n^kappa + tol``."""
    z = solution.z
    y = solution.values
    lo = bounds.lower(z)
    hi = bounds.upper(z)
    bad = np.nonzero((y < lo - tolerance) | (y > hi + tolerance))[0]
    return [BoundViolation(int(n), float(z[n]), float(y[n]), float(lo[n]), float(hi[n])) for n in bad]
