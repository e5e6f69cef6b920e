"""Closed-form quantities from the convergence analysis of the scheme."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .kernel import KernelBound, ProblemParams
from .special import gamma_fn

__all__ = [
    "AmplificationParams",
    "Admissibility",
    "SolutionBounds",
    "amplification_f",
    "amplification_f_recurrence",
    "asymptotic_coefficient",
    "bounds_coefficients",
    "kernel_bound_constants",
    "matched_coefficient",
    "midpoint_admissible",
    "starting_value",
    "theoretical_order",
]

MIDPOINT_W = 2.0


@dataclass(frozen=True)
class SolutionBounds:
    """``C1 z^kappa <= y(z) <= C2 z^kappa`` on ``[0, 1]``."""

    C1: float
    C2: float
    kappa: float

    def lower(self, z):
        return self.C1 * z**self.kappa

    def upper(self, z):
        return self.C2 * z**self.kappa


@dataclass(frozen=True)
class AmplificationParams:
    A: float
    B: float
    beta: float
    gamma: float

    def __post_init__(self):
        if not (self.A > 0 and self.B > 0):
            raise ValueError("A and B must be positive")
        if self.beta < 1 or self.gamma < 0:
            raise ValueError(f"need beta >= 1 and gamma >= 0, got beta={self.beta}, gamma={self.gamma}")


@dataclass(frozen=True)
class Admissibility:
    admissible: bool
    exponent_ok: bool
    A: float
    threshold: float


def _lower_branch_is_first(params: ProblemParams) -> bool:
    return params.alpha <= 1.0 - 1.0 / (params.m + 1.0)


def bounds_coefficients(params: ProblemParams) -> SolutionBounds:
    a, m = params.alpha, params.m
    k = params.kappa
    if _lower_branch_is_first(params):
        inner = (
            (a / 2.0) ** (1.0 - a)
            * math.exp(math.lgamma(k) - math.lgamma(2.0 - a + k))
            / (2.0 - a + m * (3.0 - a))
        )
    else:
        inner = (
            (a / 2.0) ** (2.0 - a)
            * math.exp(math.lgamma(1.0 + k) - math.lgamma(2.0 - a + k))
            / (2.0 - a)
        )
    c1 = inner ** (1.0 / (m + 1.0))
    c2 = gamma_fn(3.0 - a) ** (-1.0 / (m + 1.0))
    return SolutionBounds(C1=c1, C2=c2, kappa=k)


def asymptotic_coefficient(params: ProblemParams) -> float:
    """Coefficient ``c`` of ``y(z) ~ c z^((2-alpha)/m)`` as ``z -> 0+``."""
    a, m = params.alpha, params.m
    denom = (2.0 - a) * (1.0 + 1.0 / m) - 1.0
    if not denom > 0:
        raise ValueError(f"(2-alpha)(1+1/m) - 1 must be positive, got {denom}")
    k = params.kappa
    return (a / 2.0) ** (2.0 - a) * math.exp(math.lgamma(k) - math.lgamma(1.0 - a + k)) / denom


def matched_coefficient(params: ProblemParams) -> float:
    """Coefficient obtained by balancing ``c^(m+1) z^(kappa(m+1))`` against the
    leading-order kernel ``(m+1)/m (alpha/2)^(2-alpha) (z-u)^(1-alpha) / Gamma(2-alpha)``.

    Equals ``(asymptotic_coefficient / m)^(1/m)``; the two agree only at m = 1.
    """
    return (asymptotic_coefficient(params) / params.m) ** (1.0 / params.m)


def starting_value(params: ProblemParams, h: float, start: str = "asymptotic") -> float:
    """``c h^kappa`` with ``c`` from :func:`asymptotic_coefficient` (default) or
    :func:`matched_coefficient` (``start="matched"``)."""
    if not 0.0 < h <= 1.0:
        raise ValueError(f"step must satisfy 0 < h <= 1, got {h}")
    if start == "asymptotic":
        c = asymptotic_coefficient(params)
    elif start == "matched":
        c = matched_coefficient(params)
    else:
        raise ValueError(f"unknown start {start!r}; expected 'asymptotic' or 'matched'")
    return c * h**params.kappa


def kernel_bound_constants(params: ProblemParams, X: float = 0.0, W: float = MIDPOINT_W) -> KernelBound:
    a, m = params.alpha, params.m
    if not 0.0 <= X < 1.0:
        raise ValueError(f"X must satisfy 0 <= X < 1, got {X}")
    D = (m + 1.0) / (2.0 * m) / gamma_fn(2.0 - a) * (1.0 / (1.0 - X)) ** (1.0 - a)
    c1 = bounds_coefficients(params).C1
    A = W * D / ((m + 1.0) * c1**m)
    return KernelBound(X=X, D=D, A=A, W=W)


def amplification_f(p: AmplificationParams, n: int) -> float:
    """Closed-form solution ``f(n)`` of the nonlocal recurrence.

    The bracket ``prod_{j=2}^{n-1} b_j + sum_{i=2}^{n-1} a_i prod_{j=i+1}^{n-1} b_j``
    with ``a_i = i^-beta`` and ``b_j = 1 + A j^(gamma-beta)`` is accumulated
    from ``j = n-1`` downwards with one running product, so the cost is O(n).
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if n == 1:
        return 1.0
    prod = 1.0
    acc = 0.0
    for i in range(n - 1, 1, -1):
        acc += prod * i ** (-p.beta)
        prod *= 1.0 + p.A * i ** (p.gamma - p.beta)
    return 1.0 + p.A * n**p.gamma * (prod + acc)


def amplification_f_recurrence(p: AmplificationParams, n_max: int) -> list[float]:
    """f(1..n_max) from ``f(n) = A n^gamma sum_{i<n} f(i)/i^beta + 1`` directly."""
    f = [1.0]
    s = 1.0  # running sum of f(i) / i^beta
    for n in range(2, n_max + 1):
        fn = p.A * n**p.gamma * s + 1.0
        f.append(fn)
        s += fn * n ** (-p.beta)
    return f


def theoretical_order(params: ProblemParams, bound: KernelBound | None = None) -> float:
    """Guaranteed convergence order of the midpoint scheme (may be negative)."""
    if bound is None:
        bound = kernel_bound_constants(params)
    a, m = params.alpha, params.m
    c1 = bounds_coefficients(params).C1
    return 2.0 - (2.0 - a) * (1.0 - 1.0 / m) - MIDPOINT_W * bound.D / ((m + 1.0) * c1**m)


def midpoint_admissible(params: ProblemParams, bound: KernelBound | None = None) -> Admissibility:
    if bound is None:
        bound = kernel_bound_constants(params)
    a, m = params.alpha, params.m
    c1 = bounds_coefficients(params).C1
    A = MIDPOINT_W * bound.D / ((m + 1.0) * c1**m)
    threshold = a + (2.0 - a) / m
    exponent_ok = m > 2.0 - a
    return Admissibility(admissible=exponent_ok and A < threshold, exponent_ok=exponent_ok,
                         A=A, threshold=threshold)
