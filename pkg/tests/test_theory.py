import math
import warnings

import numpy as np
import pytest

from fracpme.kernel import ProblemParams
from fracpme.theory import (
    AmplificationParams,
    amplification_f,
    amplification_f_recurrence,
    asymptotic_coefficient,
    bounds_coefficients,
    kernel_bound_constants,
    matched_coefficient,
    midpoint_admissible,
    starting_value,
    theoretical_order,
)

# mpmath, 40 digits
C1_06_1 = 0.31319201311261666177
C2_06_1 = 0.89724200350137566108
ASYM_05_2 = 0.13519564801345694580
START_05_2_H1000 = 7.6026099863855364004e-4
ORDER_06_1_X0 = -1.5986246481348250884
A_099_10 = 0.19282728909354230180


def test_c2_tends_to_one_at_alpha_one():
    assert bounds_coefficients(ProblemParams(1 - 1e-9, 1)).C2 == pytest.approx(1.0, abs=1e-8)


def test_branch_boundary_uses_first_formula():
    p = ProblemParams(0.5, 1)
    a, m, k = 0.5, 1.0, 1.5
    first = ((a / 2) ** (1 - a) * math.gamma(k) / math.gamma(2 - a + k) / (2 - a + m * (3 - a))) ** 0.5
    assert bounds_coefficients(p).C1 == pytest.approx(first, rel=1e-14)


def test_second_branch_values():
    b = bounds_coefficients(ProblemParams(0.6, 1))
    assert b.C1 == pytest.approx(C1_06_1, rel=1e-13)
    assert b.C2 == pytest.approx(C2_06_1, rel=1e-13)
    assert b.kappa == pytest.approx(1.4)


def test_c1_below_c2_on_grid():
    flagged = []
    for a in np.linspace(0.02, 0.98, 20):
        for m in np.linspace(1.0, 100.0, 20):
            b = bounds_coefficients(ProblemParams(a, m))
            assert b.C1 > 0 and b.C2 > 0
            if b.C1 > b.C2:
                flagged.append((a, m))
    if flagged:
        warnings.warn(f"C1 > C2 at {flagged}")


def test_asymptotic_coefficient_value():
    assert asymptotic_coefficient(ProblemParams(0.5, 2)) == pytest.approx(ASYM_05_2, rel=1e-13)


def test_asymptotic_denominator_at_boundary():
    a, m = 1.0, 1.0
    assert (2 - a) * (1 + 1 / m) - 1 == 1.0


def test_starting_value():
    p = ProblemParams(0.5, 2)
    assert starting_value(p, 1e-3) == pytest.approx(START_05_2_H1000, rel=1e-13)
    assert starting_value(p, 1e-300) < 1e-200


@pytest.mark.parametrize("alpha, m", [(0.5, 2), (0.9, 10), (0.3, 1.0)])
def test_starting_value_power_law(alpha, m):
    p = ProblemParams(alpha, m)
    for h in (0.5, 1e-2, 1e-4):
        assert starting_value(p, h) / starting_value(p, h / 2) == pytest.approx(2**p.kappa, rel=1e-13)
        assert starting_value(p, h) / h**p.kappa == pytest.approx(asymptotic_coefficient(p), rel=1e-13)


def test_starting_value_rejects_bad_step():
    with pytest.raises(ValueError):
        starting_value(ProblemParams(0.5, 2), 0.0)
    with pytest.raises(ValueError):
        starting_value(ProblemParams(0.5, 2), 0.1, start="bogus")


def test_matched_coefficient_agrees_at_m_one():
    p = ProblemParams(0.6, 1)
    assert matched_coefficient(p) == pytest.approx(asymptotic_coefficient(p), rel=1e-14)


def test_matched_coefficient_balances_leading_order():
    # c^m = (m+1)/m (alpha/2)^(2-alpha) Gamma(kappa+1) / Gamma(kappa+3-alpha)
    for a, m in [(0.8, 10), (0.3, 4), (0.95, 2.5)]:
        p = ProblemParams(a, m)
        k = p.kappa
        rhs = (m + 1) / m * (a / 2) ** (2 - a) * math.gamma(k + 1) / math.gamma(k + 3 - a)
        assert matched_coefficient(p) ** m == pytest.approx(rhs, rel=1e-12)


def _closed_form_literal(p, n):
    if n == 1:
        return 1.0
    def b(j):
        return 1 + p.A * j ** (p.gamma - p.beta)
    prod = math.prod(b(j) for j in range(2, n))
    tail = sum(i ** (-p.beta) * math.prod(b(j) for j in range(i + 1, n)) for i in range(2, n))
    return 1 + p.A * n**p.gamma * (prod + tail)


def test_amplification_small_n():
    p = AmplificationParams(A=0.7, B=1.0, beta=1.5, gamma=0.4)
    assert amplification_f(p, 1) == 1.0
    assert amplification_f(p, 2) == pytest.approx(1 + 0.7 * 2**0.4, rel=1e-15)


def test_amplification_against_recurrence_example():
    p = AmplificationParams(A=1.0, B=1.0, beta=1.5, gamma=0.4)
    f = amplification_f_recurrence(p, 50)
    assert amplification_f(p, 50) == pytest.approx(f[49], rel=1e-10)


def test_amplification_against_literal_double_loop():
    p = AmplificationParams(A=2.0, B=1.0, beta=1.75, gamma=0.75)
    for n in (1, 2, 3, 7, 40):
        assert amplification_f(p, n) == pytest.approx(_closed_form_literal(p, n), rel=1e-13)


def test_amplification_scales_to_large_n():
    p = AmplificationParams(A=0.5, B=1.0, beta=1.5, gamma=0.5)
    assert math.isfinite(amplification_f(p, 100_000))


def test_amplification_params_validation():
    with pytest.raises(ValueError):
        AmplificationParams(A=1, B=1, beta=0.5, gamma=0)
    with pytest.raises(ValueError):
        AmplificationParams(A=1, B=1, beta=1.5, gamma=-0.1)
    with pytest.raises(ValueError):
        AmplificationParams(A=0, B=1, beta=1.5, gamma=0)


def test_theoretical_order_value():
    assert theoretical_order(ProblemParams(0.6, 1), kernel_bound_constants(ProblemParams(0.6, 1), 0.0)) == pytest.approx(
        ORDER_06_1_X0, rel=1e-12
    )


@pytest.mark.parametrize("alpha", [0.5, 0.9])
def test_theoretical_order_large_m_limit(alpha):
    assert abs(theoretical_order(ProblemParams(alpha, 1e4)) - alpha) <= 0.05


@pytest.mark.parametrize("alpha, m", [(0.6, 1), (0.5, 100), (0.9, 10)])
def test_theoretical_order_decreases_in_X(alpha, m):
    p = ProblemParams(alpha, m)
    orders = [theoretical_order(p, kernel_bound_constants(p, X)) for X in np.linspace(0, 0.95, 20)]
    assert all(b < a for a, b in zip(orders, orders[1:]))


def test_admissibility_examples():
    assert not midpoint_admissible(ProblemParams(0.5, 1)).admissible
    adm = midpoint_admissible(ProblemParams(0.99, 10))
    assert adm.exponent_ok
    assert adm.A == pytest.approx(A_099_10, rel=1e-12)
    assert adm.threshold == pytest.approx(1.091)
    assert adm.admissible
    # m == 2 - alpha exactly is excluded
    assert not midpoint_admissible(ProblemParams(0.5, 1.5)).exponent_ok


def test_kernel_bound_constants_A_matches_definition():
    p = ProblemParams(0.7, 3)
    kb = kernel_bound_constants(p, 0.4)
    c1 = bounds_coefficients(p).C1
    assert kb.A == pytest.approx(kb.W * kb.D / ((p.m + 1) * c1**p.m), rel=1e-15)
