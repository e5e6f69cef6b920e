"""Map the Volterra solution back to the self-similar profile and to u(x, t)."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .kernel import ProblemParams
from .solver import DiscreteSolution

__all__ = ["PhysicalProfile", "evaluate_u", "profile", "wetting_front"]


@dataclass(frozen=True)
class PhysicalProfile:
    """U on the image grid ``eta_n = eta_star (1 - z_n)``, so ``eta`` decreases with n."""

    params: ProblemParams
    eta_star: float
    z: np.ndarray
    y_values: np.ndarray
    eta_nodes: np.ndarray
    U_values: np.ndarray

    def U(self, eta):
        """Piecewise-linear U(eta); 1 at eta = 0 and 0 for eta >= eta_star."""
        eta = np.asarray(eta, dtype=float)
        # np.interp wants increasing abscissae
        out = np.interp(eta, self.eta_nodes[::-1], self.U_values[::-1])
        out = np.where(eta >= self.eta_star, 0.0, out)
        out = np.where(eta <= 0.0, 1.0, out)
        return out if out.ndim else float(out)

    def is_monotone(self) -> bool:
        # U along increasing eta is values along decreasing n
        return bool(np.all(np.diff(self.U_values[::-1]) <= 0.0))


def wetting_front(solution: DiscreteSolution) -> float:
    """eta* = (m y(1)^m)^(-1/2)."""
    yN = float(solution.values[-1])
    if not yN > 0:
        raise ValueError("wetting front undefined: y(1) must be positive")
    m = solution.params.m
    return 1.0 / math.sqrt(m * yN**m)


def profile(solution: DiscreteSolution) -> PhysicalProfile:
    eta_star = wetting_front(solution)
    z = solution.z
    # (m eta*^2)^(1/m) == 1 / y_N; dividing by y_N keeps U(0) = 1 and U(eta*) = 0 exact.
    U = solution.values / solution.values[-1]
    eta = eta_star * (1.0 - z)
    return PhysicalProfile(solution.params, eta_star, z, solution.values, eta, U)


def evaluate_u(prof: PhysicalProfile, x, t):
    """u(x, t) = U(x t^(-alpha/2))."""
    t = np.asarray(t, dtype=float)
    if np.any(t <= 0):
        raise ValueError("t must be positive")
    x = np.asarray(x, dtype=float)
    if np.any(x < 0):
        raise ValueError("x must be nonnegative")
    return prof.U(x * t ** (-prof.params.alpha / 2.0))
