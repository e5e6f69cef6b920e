"""Volterra kernel of the self-similar time-fractional porous medium equation.

After the self-similar reduction the profile ``y`` on ``[0, 1]`` solves

    y(z)^(m+1) = int_0^z K(z, u) y(u) du

with

    K(z, u) = (m+1)/m / Gamma(1-alpha)
              * int_x^1 (s^(2/alpha) (1-u) - (1-alpha/2)(1-z)) s^(2/alpha) (1-s)^(-alpha) ds,
    x = ((1-z)/(1-u))^(alpha/2).

Both pieces of the inner integral are upper incomplete beta tails with
``t^(4/alpha) (1-t)^(-alpha)`` and ``t^(2/alpha) (1-t)^(-alpha)`` integrands.
In the swapped ``B(x, a, b)`` order of :mod:`fracpme.special` that is
``a = 1 - alpha`` and ``b = 4/alpha + 1`` (resp. ``2/alpha + 1``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numba as nb
import numpy as np
from scipy import integrate

from .special import DEFAULT_POLICY, AccuracyPolicy, ConvergenceError, _upper, complete_beta, gamma_fn

__all__ = [
    "KernelBound",
    "ProblemParams",
    "kernel_bound",
    "kernel_eval",
    "kernel_quadrature",
    "kernel_row",
    "rhs_nested_oracle",
]


@dataclass(frozen=True)
class ProblemParams:
    """Order ``alpha`` of the time derivative and nonlinearity exponent ``m``."""

    alpha: float
    m: float

    def __post_init__(self):
        if not (0.0 < self.alpha < 1.0):
            raise ValueError(f"alpha must satisfy 0 < alpha < 1, got alpha={self.alpha}")
        # m = 1 is admitted: it is the limiting case used in the reference runs.
        if not self.m >= 1.0:
            raise ValueError(f"m must satisfy m > 1 (m = 1 allowed as the limit), got m={self.m}")

    @property
    def kappa(self) -> float:
        """Power of the solution near the origin, (2 - alpha)/m."""
        return (2.0 - self.alpha) / self.m


@dataclass(frozen=True)
class KernelBound:
    """Constants of the error analysis on ``0 <= z <= X``.

    ``D`` bounds the kernel via ``K(z, u) <= D (z - u)^(1-alpha)`` and ``A`` is
    the amplification exponent ``W D / ((m+1) C1^m)``.
    """

    X: float
    D: float
    A: float
    W: float = 2.0

    def __post_init__(self):
        if not 0.0 <= self.X < 1.0:
            raise ValueError(f"X must satisfy 0 <= X < 1, got {self.X}")
        if not (self.D > 0 and self.A > 0):
            raise ValueError("D and A must be positive")


@dataclass(frozen=True)
class _KernelConstants:
    alpha: float
    prefactor: float
    beta4: float
    beta2: float
    q: float
    p4: float
    p2: float


_CONSTS: dict[ProblemParams, _KernelConstants] = {}


def kernel_constants(params: ProblemParams) -> _KernelConstants:
    """z, u-independent pieces of the closed form, cached per parameter pair."""
    if params in _CONSTS:
        return _CONSTS[params]
    a = params.alpha
    q = 1.0 - a
    p4 = 4.0 / a + 1.0
    p2 = 2.0 / a + 1.0
    consts = _KernelConstants(
        alpha=a,
        prefactor=(params.m + 1.0) / params.m / gamma_fn(1.0 - a),
        beta4=complete_beta(p4, q),
        beta2=complete_beta(p2, q),
        q=q,
        p4=p4,
        p2=p2,
    )
    _CONSTS[params] = consts
    return consts


@nb.njit(cache=True, nogil=True)
def _kernel(z, u, alpha, pref, p4, p2, q, b4, b2, eps, max_iter):
    if u >= z:
        return 0.0
    omu = 1.0 - u
    omz = 1.0 - z
    # x and 1 - x are formed separately so that neither loses digits.
    y = -math.expm1(0.5 * alpha * math.log1p(-(z - u) / omu))
    x = math.exp(0.5 * alpha * math.log(omz / omu)) if omz > 0.0 else 0.0
    t4 = _upper(x, y, p4, q, b4, eps, max_iter)
    t2 = _upper(x, y, p2, q, b2, eps, max_iter)
    return pref * (omu * t4 - (1.0 - 0.5 * alpha) * omz * t2)


@nb.njit(cache=True, nogil=True)
def _kernel_row(z, us, alpha, pref, p4, p2, q, b4, b2, eps, max_iter):
    out = np.empty(us.shape[0])
    for j in range(us.shape[0]):
        out[j] = _kernel(z, us[j], alpha, pref, p4, p2, q, b4, b2, eps, max_iter)
    return out


def _check_zu(z, u):
    if not (0.0 <= u <= z <= 1.0):
        raise ValueError(f"kernel requires 0 <= u <= z <= 1, got z={z}, u={u}")


def kernel_eval(
    params: ProblemParams, z: float, u: float, policy: AccuracyPolicy = DEFAULT_POLICY
) -> float:
    """K(z, u) from the incomplete beta closed form."""
    _check_zu(z, u)
    c = kernel_constants(params)
    val = _kernel(float(z), float(u), c.alpha, c.prefactor, c.p4, c.p2, c.q,
                  c.beta4, c.beta2, policy.rel_tol, policy.max_iter)
    if math.isnan(val):
        raise ConvergenceError(f"kernel evaluation failed at z={z}, u={u}")
    return val


def kernel_row(
    params: ProblemParams, z: float, us: np.ndarray, policy: AccuracyPolicy = DEFAULT_POLICY
) -> np.ndarray:
    """K(z, u_j) for an array of ``u_j <= z``; bitwise equal to :func:`kernel_eval`."""
    us = np.ascontiguousarray(us, dtype=float)
    if us.size and (us.min() < 0.0 or us.max() > z or z > 1.0):
        raise ValueError(f"kernel_row requires 0 <= u <= z <= 1, got z={z}")
    c = kernel_constants(params)
    out = _kernel_row(float(z), us, c.alpha, c.prefactor, c.p4, c.p2, c.q,
                      c.beta4, c.beta2, policy.rel_tol, policy.max_iter)
    if np.isnan(out).any():
        raise ConvergenceError(f"kernel evaluation failed on row z={z}")
    return out


def kernel_bound(params: ProblemParams, bound: KernelBound, z: float, u: float) -> float:
    """Upper bound D (z - u)^(1 - alpha) valid for 0 <= u <= z <= X."""
    if not 0.0 <= u <= z:
        raise ValueError(f"kernel_bound requires 0 <= u <= z, got z={z}, u={u}")
    if z > bound.X:
        raise ValueError(f"kernel_bound requires z <= X={bound.X}, got z={z}")
    return bound.D * (z - u) ** (1.0 - params.alpha)


def _singular_tail(g: Callable[[float], float], lo: float, alpha: float, epsrel: float) -> float:
    """int_lo^1 g(s) (1-s)^(-alpha) ds via s = 1 - v^(1/(1-alpha))."""
    q = 1.0 - alpha
    vmax = (1.0 - lo) ** q
    if vmax == 0.0:
        return 0.0
    val, _ = integrate.quad(
        lambda v: g(1.0 - v ** (1.0 / q)), 0.0, vmax, epsabs=0.0, epsrel=epsrel, limit=200
    )
    return val / q


def kernel_quadrature(params: ProblemParams, z: float, u: float, epsrel: float = 1e-12) -> float:
    """K(z, u) by adaptive quadrature of its defining integral (oracle)."""
    _check_zu(z, u)
    if u == z:
        return 0.0
    a = params.alpha
    lo = ((1.0 - z) / (1.0 - u)) ** (a / 2.0)
    e = 2.0 / a

    def g(s):
        se = s**e
        return (se * (1.0 - u) - (1.0 - a / 2.0) * (1.0 - z)) * se

    pref = (params.m + 1.0) / params.m / gamma_fn(1.0 - a)
    return pref * _singular_tail(g, lo, a, epsrel)


def rhs_nested_oracle(
    params: ProblemParams, y_profile: Callable[[float], float], z: float, epsrel: float = 1e-10
) -> float:
    """Right-hand side of the fixed-point equation by nested quadrature.

    Evaluates ``(m+1)/m int_0^z (alpha/2 + (1-alpha/2) z - t) F y(t) dt`` where
    ``F y(t) = 1/Gamma(1-alpha) int_{(1-t)^(alpha/2)}^1 (1-s)^(-alpha) y(1 - s^(-2/alpha)(1-t)) ds``.
    The closed-form kernel is never used here.
    """
    if not 0.0 <= z <= 1.0:
        raise ValueError(f"z must lie in [0, 1], got {z}")
    if z == 0.0:
        return 0.0
    a = params.alpha
    g1a = gamma_fn(1.0 - a)

    def f_alpha(t):
        if t <= 0.0:
            return 0.0
        omt = 1.0 - t

        def g(s):
            arg = 1.0 - s ** (-2.0 / a) * omt
            return y_profile(min(max(arg, 0.0), t))

        return _singular_tail(g, omt ** (a / 2.0), a, epsrel) / g1a

    val, _ = integrate.quad(
        lambda t: (a / 2.0 + (1.0 - a / 2.0) * z - t) * f_alpha(t),
        0.0, z, epsabs=0.0, epsrel=epsrel, limit=200,
    )
    return (params.m + 1.0) / params.m * val
