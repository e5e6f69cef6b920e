"""Finite-difference scheme for the nonlinear Volterra equation.

The scheme is

    y_n^(m+1) = h * sum_{i=1}^{n-1} w_{n,i} K(z_n, z_i) y_i,   n = 2..N,

with ``y_0 = 0`` and a prescribed starting value ``y_1``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numba as nb
import numpy as np

from .kernel import ProblemParams, kernel_row
from .theory import MIDPOINT_W, starting_value

__all__ = [
    "DiscreteSolution",
    "NegativeRadicandError",
    "QuadratureRule",
    "UniformGrid",
    "midpoint_rule",
    "solve_generic",
    "solve_midpoint",
]


class NegativeRadicandError(ArithmeticError):
    """The weighted kernel sum of a row came out negative."""


@dataclass(frozen=True)
class UniformGrid:
    N: int

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 1:
            raise ValueError(f"N must be a positive integer, got {self.N}")

    @property
    def h(self) -> float:
        return 1.0 / self.N

    @property
    def nodes(self) -> np.ndarray:
        # n / N rather than n * h so that z_N == 1 exactly
        return np.arange(self.N + 1) / self.N


@dataclass(frozen=True)
class QuadratureRule:
    """Weights ``w_{n,i}`` of the scheme.

    ``row`` optionally returns the nonzero ``(indices, weights)`` of row ``n`` in
    ascending index order; when absent it is built from ``weight_fn``.
    """

    name: str
    weight_fn: Callable[[int, int], float]
    weight_bound: float
    sign_of_consistency_error: str = "unknown"
    row_fn: Callable[[int], tuple[np.ndarray, np.ndarray]] | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.sign_of_consistency_error not in ("nonpositive", "nonnegative", "unknown"):
            raise ValueError(f"bad sign_of_consistency_error {self.sign_of_consistency_error!r}")

    def row(self, n: int) -> tuple[np.ndarray, np.ndarray]:
        if self.row_fn is not None:
            return self.row_fn(n)
        idx = np.arange(1, n)
        w = np.array([self.weight_fn(n, int(i)) for i in idx], dtype=float)
        keep = w != 0.0
        return idx[keep], w[keep]


@dataclass(frozen=True)
class DiscreteSolution:
    params: ProblemParams
    grid: UniformGrid
    values: np.ndarray
    rule_name: str
    starting_value_used: float

    def __post_init__(self):
        self.values.setflags(write=False)

    @property
    def z(self) -> np.ndarray:
        return self.grid.nodes

    def is_monotone(self) -> bool:
        return bool(np.all(np.diff(self.values) >= 0.0))

    def value_at(self, z: float) -> float:
        """Value at a grid node; raises if ``z`` is not one."""
        n = round(z * self.grid.N)
        if not math.isclose(n / self.grid.N, z, rel_tol=0.0, abs_tol=1e-12):
            raise ValueError(f"z={z} is not a node of the N={self.grid.N} grid")
        return float(self.values[n])


def _midpoint_weight(n: int, i: int) -> float:
    if not 1 <= i <= n - 1:
        return 0.0
    k = n % 2
    if i == k:
        return 0.5
    if (i - k) % 2 == 1:
        return 2.0
    return 0.0


def _midpoint_row(n: int) -> tuple[np.ndarray, np.ndarray]:
    # target n = 2j + k: 1/2 on index k, 2 on k+1, k+3, ..., n-1.
    # For k = 0 the anchor sits on y_0 = 0 and is dropped.
    k = n % 2
    idx = np.arange(k + 1, n, 2)
    w = np.full(idx.shape, 2.0)
    if k == 1:
        idx = np.concatenate(([1], idx))
        w = np.concatenate(([0.5], w))
    return idx, w


def midpoint_rule() -> QuadratureRule:
    return QuadratureRule(
        name="midpoint",
        weight_fn=_midpoint_weight,
        weight_bound=MIDPOINT_W,
        sign_of_consistency_error="nonpositive",
        row_fn=_midpoint_row,
    )


@nb.njit(cache=True, nogil=True)
def _ascending_sum(w, k, y):
    s = 0.0
    for j in range(w.shape[0]):
        s += w[j] * k[j] * y[j]
    return s


def solve_generic(
    params: ProblemParams, grid: UniformGrid, rule: QuadratureRule, y1: float
) -> DiscreteSolution:
    if grid.N < 2:
        raise ValueError(f"need N >= 2, got {grid.N}")
    if y1 < 0:
        raise ValueError(f"starting value must be nonnegative, got {y1}")
    z = grid.nodes
    h = grid.h
    inv = 1.0 / (params.m + 1.0)
    y = np.zeros(grid.N + 1)
    y[1] = y1
    for n in range(2, grid.N + 1):
        idx, w = rule.row(n)
        if w.size and (w.min() <= 0.0 or w.max() > rule.weight_bound):
            raise ValueError(f"rule {rule.name!r} produced weights outside (0, {rule.weight_bound}] in row {n}")
        kvals = kernel_row(params, z[n], z[idx])
        s = h * _ascending_sum(w, kvals, y[idx])
        if s < 0.0:
            raise NegativeRadicandError(f"row {n}: weighted kernel sum {s!r} is negative")
        y[n] = math.exp(math.log(s) * inv) if s > 0.0 else 0.0
    return DiscreteSolution(params, grid, y, rule.name, float(y1))


def solve_midpoint(params: ProblemParams, N: int, start: str = "asymptotic") -> DiscreteSolution:
    """Midpoint scheme with ``y_1`` from :func:`fracpme.theory.starting_value`.

    The odd and even subsequences are coupled only through the anchor weight
    1/2 on ``y_1``, so mild even/odd oscillation in ``y_n`` is expected.
    """
    if N < 4:
        raise ValueError(f"midpoint solve needs N >= 4, got {N}")
    grid = UniformGrid(N)
    return solve_generic(params, grid, midpoint_rule(), starting_value(params, grid.h, start))
