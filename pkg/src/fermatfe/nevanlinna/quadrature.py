from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from fermatfe.errors import ConstraintViolationError, QuadratureConvergenceError
from fermatfe.expr import DEFAULT_POLE_GUARD, Expr, evaluate_array

logger = logging.getLogger(__name__)

CHUNK = 1 << 18


@dataclass(slots=True)
class QuadratureConfig:
    quad_order: int = 64
    tol: float = 1e-6
    max_doublings: int = 20
    pole_guard: float = DEFAULT_POLE_GUARD
    nudge: float = 1e-3
    max_workers: int = 1

    def __post_init__(self):
        if self.quad_order < 2:
            raise ConstraintViolationError(f"quad_order must be >= 2, got {self.quad_order}.")
        if not self.tol > 0:
            raise ConstraintViolationError(f"tol must be positive, got {self.tol}.")
        if self.max_doublings < 1:
            raise ConstraintViolationError("max_doublings must be at least 1.")
        if not self.pole_guard > 0:
            raise ConstraintViolationError(f"pole_guard must be > 0, got {self.pole_guard}.")
        if not 0 <= self.nudge < 0.5:
            raise ConstraintViolationError(f"nudge must lie in [0, 0.5), got {self.nudge}.")
        if self.max_workers < 1:
            raise ConstraintViolationError("max_workers must be at least 1.")

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _log_plus_sum(f: Expr, r: float, theta: np.ndarray, pole_guard: float) -> float:
    partial: list[float] = []
    for start in range(0, theta.size, CHUNK):
        nodes = r * np.exp(1j * theta[start : start + CHUNK])
        values = evaluate_array(f, nodes, pole_guard=pole_guard)
        if np.isnan(values).any():
            raise QuadratureConvergenceError(
                f"The circle |z| = {r} passes within the pole guard of a singularity."
            )
        with np.errstate(divide="ignore"):
            log_plus = np.maximum(np.log(np.abs(values)), 0.0)
        partial.append(math.fsum(log_plus.tolist()))
    return math.fsum(partial)


def proximity(
    f: Expr,
    r: float,
    quad_order: int = 64,
    *,
    tol: float = 1e-6,
    max_doublings: int = 20,
    pole_guard: float = DEFAULT_POLE_GUARD,
) -> float:
    """
    m(r, f) = (1/2π)∫ log⁺|f(re^{iθ})| dθ by the periodic trapezoid rule.

    The node count doubles (only the new midpoints are evaluated) until successive
    estimates agree to ``tol``·max(|m|, 1).
    """
    if not r > 0:
        raise ConstraintViolationError(f"Radius must be positive, got {r}.")
    count = int(quad_order)
    total = _log_plus_sum(f, r, 2.0 * np.pi * np.arange(count) / count, pole_guard)
    estimate = total / count
    for doubling in range(1, max_doublings + 1):
        midpoints = 2.0 * np.pi * (np.arange(count) + 0.5) / count
        total += _log_plus_sum(f, r, midpoints, pole_guard)
        count *= 2
        refined = total / count
        change = abs(refined - estimate)
        logger.debug("m(%g): %d nodes, estimate %.15g, change %.3g", r, count, refined, change)
        if change <= tol * max(abs(refined), 1.0):
            return refined
        estimate = refined
    raise QuadratureConvergenceError(
        f"Proximity at r = {r} did not converge after {max_doublings} doublings "
        f"(last change {change:.3g})."
    )
