"""Gamma, beta and incomplete beta functions.

The incomplete beta function uses the argument order

    B(x, a, b) = int_0^x (1 - t)^(a - 1) t^(b - 1) dt

which is the *swapped* order with respect to the usual convention
``int_0^x t^(p-1) (1-t)^(q-1) dt``: ``(p, q) = (b, a)``.  Everything public in
this module takes the swapped order; the ``_lower``/``_upper`` kernels work in
the usual ``(p, q)`` order and are shared with the compiled kernel code.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numba as nb

__all__ = [
    "AccuracyPolicy",
    "ConvergenceError",
    "DEFAULT_POLICY",
    "complete_beta",
    "gamma_fn",
    "incomplete_beta_paper",
    "incomplete_beta_paper_upper",
]

_FPMIN = 1e-300


class ConvergenceError(ArithmeticError):
    """A series or continued fraction did not converge within ``max_iter``."""


@dataclass(frozen=True)
class AccuracyPolicy:
    rel_tol: float = 1e-12
    max_iter: int = 500

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


DEFAULT_POLICY = AccuracyPolicy()


def gamma_fn(x: float) -> float:
    if not x > 0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    if x > 171.0:
        raise OverflowError(f"gamma_fn({x}) overflows double precision")
    return math.gamma(x)


def complete_beta(a: float, b: float) -> float:
    """B(a, b) = Gamma(a) Gamma(b) / Gamma(a + b)."""
    if not (a > 0 and b > 0):
        raise ValueError(f"complete_beta requires a, b > 0, got ({a}, {b})")
    if a + b < 171.0:
        return math.gamma(a) * math.gamma(b) / math.gamma(a + b)
    return math.exp(math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b))


@nb.njit(cache=True, nogil=True)
def _betacf(x, p, q, eps, max_iter):
    # Modified Lentz evaluation of the incomplete beta continued fraction.
    # Returns NaN when max_iter is exhausted.
    qab = p + q
    qap = p + 1.0
    qam = p - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _FPMIN:
        d = _FPMIN
    d = 1.0 / d
    h = d
    for it in range(1, max_iter + 1):
        m2 = 2 * it
        aa = it * (q - it) * x / ((qam + m2) * (p + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        h *= d * c
        aa = -(p + it) * (qab + it) * x / ((p + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _FPMIN:
            d = _FPMIN
        c = 1.0 + aa / c
        if abs(c) < _FPMIN:
            c = _FPMIN
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    return math.nan


@nb.njit(cache=True, nogil=True)
def _lower(x, y, p, q, bpq, eps, max_iter):
    """int_0^x t^(p-1) (1-t)^(q-1) dt with y = 1 - x supplied by the caller."""
    if x <= 0.0:
        return 0.0
    if y <= 0.0:
        return bpq
    front = x**p * y**q
    if x < (p + 1.0) / (p + q + 2.0):
        return front * _betacf(x, p, q, eps, max_iter) / p
    return bpq - front * _betacf(y, q, p, eps, max_iter) / q


@nb.njit(cache=True, nogil=True)
def _upper(x, y, p, q, bpq, eps, max_iter):
    """int_x^1 t^(p-1) (1-t)^(q-1) dt with y = 1 - x supplied by the caller."""
    if y <= 0.0:
        return 0.0
    if x <= 0.0:
        return bpq
    front = x**p * y**q
    if x < (p + 1.0) / (p + q + 2.0):
        return bpq - front * _betacf(x, p, q, eps, max_iter) / p
    return front * _betacf(y, q, p, eps, max_iter) / q


def _check_args(x, a, b):
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if not (a > 0 and b > 0):
        raise ValueError(f"a, b must be positive, got ({a}, {b})")


def incomplete_beta_paper(
    x: float, a: float, b: float, policy: AccuracyPolicy = DEFAULT_POLICY
) -> float:
    """int_0^x (1 - t)^(a-1) t^(b-1) dt."""
    _check_args(x, a, b)
    val = _lower(float(x), 1.0 - x, float(b), float(a), complete_beta(a, b),
                 policy.rel_tol, policy.max_iter)
    if math.isnan(val):
        raise ConvergenceError(
            f"incomplete beta did not converge for x={x}, a={a}, b={b} "
            f"within {policy.max_iter} iterations"
        )
    return val


def incomplete_beta_paper_upper(
    x: float, a: float, b: float, policy: AccuracyPolicy = DEFAULT_POLICY
) -> float:
    """Complement int_x^1 (1 - t)^(a-1) t^(b-1) dt, accurate as x -> 1."""
    _check_args(x, a, b)
    val = _upper(float(x), 1.0 - x, float(b), float(a), complete_beta(a, b),
                 policy.rel_tol, policy.max_iter)
    if math.isnan(val):
        raise ConvergenceError(
            f"incomplete beta did not converge for x={x}, a={a}, b={b} "
            f"within {policy.max_iter} iterations"
        )
    return val
