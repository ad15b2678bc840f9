from __future__ import annotations

import logging
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from fermatfe.errors import ConstraintViolationError
from fermatfe.expr import DEFAULT_POLE_GUARD

logger = logging.getLogger(__name__)

REJECTION_FACTOR = 100
_SEED_MASK = (1 << 64) - 1


@dataclass(slots=True)
class SamplePlan:
    """Annulus r_min ≤ |z| ≤ r_max sampled uniformly in area; r_min = 0 gives the full disc."""

    r_min: float = 0.5
    r_max: float = 3.0
    count: int = 500
    seed: int = 0
    pole_guard: float = DEFAULT_POLE_GUARD

    def __post_init__(self):
        self.r_min = float(self.r_min)
        self.r_max = float(self.r_max)
        if not (0.0 <= self.r_min < self.r_max):
            raise ConstraintViolationError(
                f"Sample radii must satisfy 0 <= r_min < r_max, got {self.r_min}, {self.r_max}."
            )
        if isinstance(self.count, bool) or int(self.count) != self.count or self.count < 1:
            raise ConstraintViolationError(f"count must be >= 1, got {self.count}.")
        self.count = int(self.count)
        if int(self.seed) != self.seed:
            raise ConstraintViolationError(f"seed must be an integer, got {self.seed!r}.")
        self.seed = int(self.seed)
        if not self.pole_guard > 0:
            raise ConstraintViolationError(f"pole_guard must be > 0, got {self.pole_guard}.")
        self.pole_guard = float(self.pole_guard)

    @property
    def max_attempts(self) -> int:
        return REJECTION_FACTOR * self.count

    def generator(self) -> np.random.Generator:
        """Counter-based Philox stream keyed by the seed (two's complement for negatives)."""
        return np.random.Generator(np.random.Philox(key=self.seed & _SEED_MASK))

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def draw_points(rng: np.random.Generator, plan: SamplePlan, size: int) -> np.ndarray:
    """
    ``size`` points uniform in area on the annulus: inverse CDF on r², uniform angle.
    """
    lo, hi = plan.r_min**2, plan.r_max**2
    radius = np.sqrt(lo + rng.random(size) * (hi - lo))
    angle = 2.0 * np.pi * rng.random(size)
    return radius * np.exp(1j * angle)
