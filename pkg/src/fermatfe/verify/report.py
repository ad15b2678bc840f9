from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any


@dataclass(slots=True)
class ResidualReport:
    equation: str
    samples: int
    max_rel: float
    mean_rel: float
    worst_point: complex
    tolerance: float
    passed: bool
    rejected: int = 0
    flagged: int = 0
    parameters: dict[str, Any] = field(default_factory=dict)
    config: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {
            "equation": self.equation,
            "samples": self.samples,
            "max_rel": self.max_rel,
            "mean_rel": self.mean_rel,
            "worst_point": self.worst_point,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "rejected": self.rejected,
            "flagged": self.flagged,
            "parameters": dict(self.parameters),
            "config": dict(self.config),
        }

    @property
    def margin(self) -> float:
        """How many times over tolerance the worst sample is."""
        return self.max_rel / self.tolerance
