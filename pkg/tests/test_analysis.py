import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from fracpme.analysis import (
    REFERENCE_TABLE,
    DegenerateOrderError,
    aitken_order,
    bound_check,
    empirical_order_study,
    table_harness,
)
from fracpme.kernel import ProblemParams
from fracpme.solver import UniformGrid, midpoint_rule, solve_generic, solve_midpoint
from fracpme.theory import SolutionBounds, bounds_coefficients


def synthetic(p, c=0.37, N=100):
    return [c * (1.0 / (N * k)) ** p for k in (1, 2, 4)]


@pytest.mark.parametrize("p", [0.3, 0.6, 1.0, 1.5])
def test_aitken_recovers_power(p):
    assert aitken_order(*synthetic(p)) == pytest.approx(p, abs=1e-10)


@given(st.floats(0.1, 3.0), st.floats(-5.0, 5.0), st.floats(0.01, 10.0))
def test_aitken_shift_invariant(p, shift, c):
    v = [shift + x for x in synthetic(p, c)]
    assert aitken_order(*v) == pytest.approx(p, abs=1e-6)


def test_aitken_degenerate():
    with pytest.raises(DegenerateOrderError):
        aitken_order(1.0, 1.0, 1.0)
    with pytest.raises(DegenerateOrderError):
        aitken_order(1.0, 1.0, 0.5)
    assert isinstance(DegenerateOrderError(), ArithmeticError)


def test_aitken_sign_only_in_magnitudes():
    assert aitken_order(1.0, 0.5, 0.75) == pytest.approx(1.0)


def test_order_study_report_fields():
    rep = empirical_order_study(ProblemParams(0.6, 1), 32)
    assert rep.error is None and rep.N_base == 32
    assert math.isfinite(rep.empirical_order)
    assert rep.theoretical_order_reference == 0.16
    rec = rep.as_record()
    assert list(rec) == [
        "alpha", "m", "N_base", "evaluation_point", "empirical_order",
        "theoretical_order_computed", "theoretical_order_paper", "runtime_seconds",
    ]


def test_order_study_max_norm():
    rep = empirical_order_study(ProblemParams(0.8, 10), 16, "max")
    assert rep.empirical_order > 0


def test_order_study_rejects_off_grid_point():
    with pytest.raises(ValueError):
        empirical_order_study(ProblemParams(0.8, 10), 16, 0.3)
    with pytest.raises(ValueError):
        empirical_order_study(ProblemParams(0.8, 10), 4)


def test_order_matches_manual_three_solves():
    p = ProblemParams(0.7, 10)
    v = [solve_midpoint(p, n).values[-1] for n in (40, 80, 160)]
    assert empirical_order_study(p, 40).empirical_order == aitken_order(*v)


def test_table_empty():
    assert table_harness([], 16) == []


def test_table_sorted_and_permutation_invariant():
    cells = [(0.9, 10), (0.6, 1), (0.8, 10)]
    a = table_harness(cells, 16)
    b = table_harness(cells[::-1], 16)
    assert [(r.params.alpha, r.params.m) for r in a] == sorted(cells)
    assert [r.empirical_order for r in a] == [r.empirical_order for r in b]


def test_table_keeps_duplicates():
    reps = table_harness([(0.6, 1), (0.6, 1)], 16)
    assert len(reps) == 2 and reps[0].empirical_order == reps[1].empirical_order


def test_table_threads_match_serial():
    cells = [(0.9, 10), (0.6, 1)]
    a = table_harness(cells, 16)
    b = table_harness(cells, 16, threads=2)
    assert [r.empirical_order for r in a] == [r.empirical_order for r in b]


def test_table_invalid_cell_raises():
    with pytest.raises(ValueError):
        table_harness([(1.5, 10)], 16)


def test_table_records_failed_cell():
    reps = table_harness([(0.6, 1)], 16, evaluation_point=0.3)
    assert reps[0].error and "ValueError" in reps[0].error
    assert math.isnan(reps[0].empirical_order)


def test_reference_table_shape():
    assert len(REFERENCE_TABLE) == 20
    assert REFERENCE_TABLE[(0.5, 100)] == (0.42, 0.88)


def test_bound_check_zero_solution_flags_interior():
    p = ProblemParams(0.8, 10)
    sol = solve_generic(p, UniformGrid(10), midpoint_rule(), 0.0)
    bad = bound_check(sol, bounds_coefficients(p), 0.0)
    assert [v.n for v in bad] == list(range(1, 11))
    assert all(v.kind == "below" for v in bad)


def test_bound_check_wide_bounds_flags_nothing():
    sol = solve_midpoint(ProblemParams(0.8, 10), 50)
    assert bound_check(sol, SolutionBounds(1e-9, 1e9, 0.12), 0.0) == []


def test_bound_check_above():
    sol = solve_midpoint(ProblemParams(0.8, 10), 50)
    bad = bound_check(sol, SolutionBounds(1e-9, 1e-6, 0.12), 0.0)
    assert bad and all(v.kind == "above" for v in bad)
    assert np.all([v.y > v.upper for v in bad])
