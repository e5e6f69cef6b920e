"""Finite-difference solver for the self-similar time-fractional porous medium equation."""

from .analysis import OrderReport, aitken_order, bound_check, empirical_order_study, table_harness
from .kernel import KernelBound, ProblemParams, kernel_bound, kernel_eval, rhs_nested_oracle
from .reconstruct import PhysicalProfile, evaluate_u, profile, wetting_front
from .solver import DiscreteSolution, QuadratureRule, UniformGrid, midpoint_rule, solve_generic, solve_midpoint
from .theory import (
    bounds_coefficients,
    kernel_bound_constants,
    midpoint_admissible,
    starting_value,
    theoretical_order,
)

__version__ = "0.1.0"
