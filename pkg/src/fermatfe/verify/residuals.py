from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from typing import Any, Optional, Sequence

import numpy as np

from fermatfe.errors import ConstraintViolationError, TooManyRejectionsError
from fermatfe.expr import WP, Constant, Expr, Pow, Shift, WPPrime, differentiate, evaluate_array
from fermatfe.families import SQRT3_OVER_3, GeneratedFamily, exp_affine

from .report import ResidualReport
from .sampling import SamplePlan, draw_points

logger = logging.getLogger(__name__)

DEFAULT_TOLERANCE = 1e-8
EQ6_FLAG_FACTOR = 1e3
ETA_TOL = 1e-12


@dataclass(frozen=True, slots=True)
class ResidualProblem:
    """
    Σ terms = rhs, checked through |Σ terms − rhs| / max(|term_k|, |rhs|, 1).

    ``watch`` is an optional expression whose small values mark a sample as flagged
    (|watch| < ``flag_below``); flagged samples still count.
    """

    equation: str
    terms: tuple[Expr, ...]
    rhs: Expr
    watch: Optional[Expr] = None
    flag_below: float = 0.0


def relative_residuals(
    problem: ResidualProblem, points, *, pole_guard: float
) -> tuple[np.ndarray, np.ndarray]:
    """
    Relative residual and flag mask at ``points``; guarded or overflowed points give nan.
    """
    points = np.asarray(points, dtype=complex)
    values = [evaluate_array(term, points, pole_guard=pole_guard) for term in problem.terms]
    rhs = evaluate_array(problem.rhs, points, pole_guard=pole_guard)
    total = np.sum(values, axis=0) if values else np.zeros(points.shape, dtype=complex)
    magnitudes = [np.abs(v) for v in values] + [np.abs(rhs), np.ones(points.shape)]
    scale = np.maximum.reduce(magnitudes)
    with np.errstate(all="ignore"):
        residual = np.abs(total - rhs) / scale
    residual[~np.isfinite(residual)] = np.nan
    flagged = np.zeros(points.shape, dtype=bool)
    if problem.watch is not None:
        watched = np.abs(evaluate_array(problem.watch, points, pole_guard=pole_guard))
        flagged = np.isfinite(watched) & (watched < problem.flag_below)
        residual[~np.isfinite(watched)] = np.nan
    return residual, flagged


def run_problem(
    problem: ResidualProblem,
    plan: SamplePlan,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
    parameters: Optional[dict[str, Any]] = None,
) -> ResidualReport:
    """Sample per ``plan``, resampling guarded points, and summarize the residuals."""
    rng = plan.generator()
    kept_points: list[np.ndarray] = []
    kept_residuals: list[np.ndarray] = []
    kept_flags: list[np.ndarray] = []
    accepted = attempts = 0

    while accepted < plan.count:
        budget = plan.max_attempts - attempts
        if budget <= 0:
            raise TooManyRejectionsError(
                f"{problem.equation}: only {accepted} of {plan.count} samples avoided the pole "
                f"guard after {attempts} attempts."
            )
        size = min(plan.count - accepted, budget)
        points = draw_points(rng, plan, size)
        attempts += size
        residual, flagged = relative_residuals(problem, points, pole_guard=plan.pole_guard)
        valid = ~np.isnan(residual)
        if not valid.all():
            logger.debug(
                "%s: resampling %d guarded points", problem.equation, int((~valid).sum())
            )
        kept_points.append(points[valid])
        kept_residuals.append(residual[valid])
        kept_flags.append(flagged[valid])
        accepted += int(valid.sum())

    points = np.concatenate(kept_points)
    residuals = np.concatenate(kept_residuals)
    flags = np.concatenate(kept_flags)
    worst = int(np.argmax(residuals))
    max_rel = float(residuals[worst])
    mean_rel = min(math.fsum(residuals.tolist()) / residuals.size, max_rel)
    flagged = int(flags.sum())
    if flagged:
        logger.warning(
            "%s: %d samples lie near zeros of a denominator", problem.equation, flagged
        )

    report = ResidualReport(
        equation=problem.equation,
        samples=int(residuals.size),
        max_rel=max_rel,
        mean_rel=mean_rel,
        worst_point=complex(points[worst]),
        tolerance=float(tolerance),
        passed=bool(max_rel <= tolerance),
        rejected=attempts - accepted,
        flagged=flagged,
        parameters=dict(parameters or {}),
        config=plan.to_dict(),
    )
    logger.info(
        "%s: max_rel=%.3g mean_rel=%.3g pass=%s",
        report.equation,
        report.max_rel,
        report.mean_rel,
        report.passed,
    )
    return report


def _require_shift(c: complex) -> complex:
    c = complex(c)
    if c == 0:
        raise ConstraintViolationError("The shift c must be nonzero.")
    return c


def _require_eta(eta: complex) -> complex:
    eta = complex(eta)
    if abs(eta**3 - 1.0) > ETA_TOL:
        raise ConstraintViolationError(f"eta must satisfy eta^3 = 1, got {eta}.")
    return eta


def ode_problem(f: Expr, n: int, alpha: complex, beta: complex) -> ResidualProblem:
    rhs = exp_affine(alpha, beta)
    return ResidualProblem(f"ode n={n}", (Pow(f, n), Pow(differentiate(f), n)), rhs)


def difference_problem(
    f: Expr, n: int, alpha: complex, beta: complex, c: complex
) -> ResidualProblem:
    c = _require_shift(c)
    rhs = exp_affine(alpha, beta)
    return ResidualProblem(f"difference n={n} c={c}", (Pow(f, n), Pow(Shift(f, c), n)), rhs)


def pair_problem(f: Expr, g: Expr, n: int, alpha: complex, beta: complex) -> ResidualProblem:
    return ResidualProblem(f"pair n={n}", (Pow(f, n), Pow(g, n)), exp_affine(alpha, beta))


def residual_ode(
    f: Expr,
    n: int,
    alpha: complex,
    beta: complex,
    plan: Optional[SamplePlan] = None,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ResidualReport:
    """Check fⁿ + (f′)ⁿ = e^{αz+β} with f′ from symbolic differentiation."""
    return run_problem(
        ode_problem(f, n, alpha, beta),
        plan or SamplePlan(),
        tolerance=tolerance,
        parameters={"n": n, "alpha": complex(alpha), "beta": complex(beta)},
    )


def residual_difference(
    f: Expr,
    n: int,
    alpha: complex,
    beta: complex,
    c: complex,
    plan: Optional[SamplePlan] = None,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ResidualReport:
    """Check fⁿ(z) + fⁿ(z+c) = e^{αz+β}; f(z+c) is evaluated through a Shift node."""
    return run_problem(
        difference_problem(f, n, alpha, beta, c),
        plan or SamplePlan(),
        tolerance=tolerance,
        parameters={"n": n, "alpha": complex(alpha), "beta": complex(beta), "c": complex(c)},
    )


def residual_pair(
    f: Expr,
    g: Expr,
    n: int,
    alpha: complex,
    beta: complex,
    plan: Optional[SamplePlan] = None,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ResidualReport:
    return run_problem(
        pair_problem(f, g, n, alpha, beta),
        plan or SamplePlan(),
        tolerance=tolerance,
        parameters={"n": n, "alpha": complex(alpha), "beta": complex(beta)},
    )


def residual_unit(
    f: Expr,
    g: Expr,
    n: int,
    plan: Optional[SamplePlan] = None,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ResidualReport:
    """Check fⁿ + gⁿ = 1."""
    problem = ResidualProblem(f"unit n={n}", (Pow(f, n), Pow(g, n)), Constant(1))
    return run_problem(problem, plan or SamplePlan(), tolerance=tolerance, parameters={"n": n})


def shift_factor(alpha: complex, c: complex, root_index: int = 0) -> complex:
    """e^{αc/3} as the principal cube root of e^{αc} times e^{2πi·root_index/3}."""
    principal = cmath.exp(complex(alpha) * complex(c)) ** (1.0 / 3.0)
    return principal * cmath.exp(2j * math.pi * (root_index % 3) / 3.0)


def eq6_problem(
    h: Expr, c: complex, eta: complex, alpha: complex, root_index: int = 0, *, pole_guard: float
) -> tuple[ResidualProblem, complex]:
    c = _require_shift(c)
    eta = _require_eta(eta)
    factor = shift_factor(alpha, c, root_index)
    s = Constant(SQRT3_OVER_3)
    shifted = Shift(h, c)
    left = Constant(eta) * (Constant(1) - s * WPPrime(h)) * Pow(WP(h), -1)
    right = Constant(factor) * (Constant(1) + s * WPPrime(shifted)) * Pow(WP(shifted), -1)
    problem = ResidualProblem(
        "eq6",
        (left, Constant(-1) * right),
        Constant(0),
        watch=WP(shifted),
        flag_below=EQ6_FLAG_FACTOR * pole_guard,
    )
    return problem, factor


def check_eq6(
    h: Expr,
    c: complex,
    eta: complex,
    alpha: complex,
    plan: Optional[SamplePlan] = None,
    *,
    root_index: int = 0,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ResidualReport:
    """
    Residual of η(1 − s℘′(h))/℘(h) − e^{αc/3}(1 + s℘′(h(z+c)))/℘(h(z+c)), s = √3/3.

    Samples with |℘(h(z+c))| below 10³·pole_guard are counted in ``flagged``.
    """
    plan = plan or SamplePlan()
    problem, factor = eq6_problem(h, c, eta, alpha, root_index, pole_guard=plan.pole_guard)
    return run_problem(
        problem,
        plan,
        tolerance=tolerance,
        parameters={
            "c": complex(c),
            "eta": complex(eta),
            "alpha": complex(alpha),
            "root_index": root_index % 3,
            "shift_factor": factor,
        },
    )


def eq7_problem(f: Expr, h: Expr, alpha: complex, beta: complex) -> ResidualProblem:
    alpha, beta = complex(alpha), complex(beta)
    inverse = exp_affine(-alpha / 3.0, -beta / 3.0)
    p = WP(h)
    terms: Sequence[Expr] = (
        Constant(3) * Pow(f, 2) * Pow(p, 2) * Pow(inverse, 2),
        Constant(-3) * f * p * inverse,
        Constant(1),
        Constant(-1) * Pow(p, 3),
    )
    return ResidualProblem("eq7", tuple(terms), Constant(0))


def check_eq7(
    f: Expr,
    h: Expr,
    alpha: complex,
    beta: complex,
    plan: Optional[SamplePlan] = None,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ResidualReport:
    """Residual of 3f²℘²(h)e^{−2(αz+β)/3} − 3f℘(h)e^{−(αz+β)/3} + 1 − ℘³(h)."""
    return run_problem(
        eq7_problem(f, h, alpha, beta),
        plan or SamplePlan(),
        tolerance=tolerance,
        parameters={"alpha": complex(alpha), "beta": complex(beta)},
    )


def verify_family(
    family: GeneratedFamily,
    plan: Optional[SamplePlan] = None,
    *,
    tolerance: float = DEFAULT_TOLERANCE,
) -> ResidualReport:
    """Run the residual check matching the equation mode the family claims to solve."""
    mode = family.mode
    if mode.kind == "ode":
        report = residual_ode(
            family.f, mode.n, family.alpha, family.beta, plan, tolerance=tolerance
        )
    elif mode.kind == "difference":
        report = residual_difference(
            family.f, mode.n, family.alpha, family.beta, mode.c, plan, tolerance=tolerance
        )
    elif mode.kind == "unit":
        report = residual_unit(family.f, family.g, mode.n, plan, tolerance=tolerance)
    else:
        report = residual_pair(
            family.f, family.g, mode.n, family.alpha, family.beta, plan, tolerance=tolerance
        )
    report.parameters["family"] = family.spec.kind.value
    return report
