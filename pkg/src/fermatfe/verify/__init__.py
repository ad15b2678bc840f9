from .report import ResidualReport
from .residuals import (
    DEFAULT_TOLERANCE,
    EQ6_FLAG_FACTOR,
    ResidualProblem,
    check_eq6,
    check_eq7,
    difference_problem,
    eq6_problem,
    eq7_problem,
    ode_problem,
    pair_problem,
    relative_residuals,
    residual_difference,
    residual_ode,
    residual_pair,
    residual_unit,
    run_problem,
    shift_factor,
    verify_family,
)
from .sampling import REJECTION_FACTOR, SamplePlan, draw_points

__all__ = [
    "ResidualReport",
    "DEFAULT_TOLERANCE",
    "EQ6_FLAG_FACTOR",
    "ResidualProblem",
    "check_eq6",
    "check_eq7",
    "difference_problem",
    "eq6_problem",
    "eq7_problem",
    "ode_problem",
    "pair_problem",
    "relative_residuals",
    "residual_difference",
    "residual_ode",
    "residual_pair",
    "residual_unit",
    "run_problem",
    "shift_factor",
    "verify_family",
    "REJECTION_FACTOR",
    "SamplePlan",
    "draw_points",
]
