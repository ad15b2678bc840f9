from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Optional, Sequence

import numpy as np

from fermatfe.errors import ConstraintViolationError, DegenerateCurveError
from fermatfe.expr import Expr
from fermatfe.jsonio import format_sig

from .poles import NoPoles, PoleEnumerator, counting
from .quadrature import QuadratureConfig, proximity

logger = logging.getLogger(__name__)

MIN_ORDER_RECORDS = 8
CSV_HEADER = "r,m,N,T"


@dataclass(frozen=True, slots=True)
class GrowthRecord:
    r: float
    m: float
    N: float
    T: float

    def __post_init__(self):
        if not (self.r > 0 and self.m >= 0 and self.N >= 0):
            raise ConstraintViolationError(
                "Growth record needs r > 0 and m, N >= 0; "
                f"got r={self.r}, m={self.m}, N={self.N}."
            )
        if not math.isclose(self.T, self.m + self.N, rel_tol=1e-12, abs_tol=1e-12):
            raise ConstraintViolationError(
                f"Growth record at r={self.r} has T={self.T} != m + N = {self.m + self.N}."
            )

    def to_dict(self) -> dict[str, float]:
        return {"r": self.r, "m": self.m, "N": self.N, "T": self.T}


@dataclass(frozen=True, slots=True)
class GrowthCurve:
    records: tuple[GrowthRecord, ...]
    label: str = ""

    def __post_init__(self):
        radii = [record.r for record in self.records]
        if any(b <= a for a, b in zip(radii, radii[1:])):
            raise ConstraintViolationError("Growth curve radii must be strictly increasing.")

    def __len__(self) -> int:
        return len(self.records)

    @property
    def radii(self) -> np.ndarray:
        return np.array([record.r for record in self.records])

    @property
    def characteristic(self) -> np.ndarray:
        return np.array([record.T for record in self.records])

    def to_csv(self) -> str:
        lines = [CSV_HEADER]
        for record in self.records:
            values = (record.r, record.m, record.N, record.T)
            lines.append(",".join(format_sig(v) for v in values))
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict[str, Any]:
        return {"label": self.label, "records": [record.to_dict() for record in self.records]}


@dataclass(slots=True)
class OrderEstimate:
    rho: float
    sse: float
    intercept: float
    fit_radii: list[float]
    local_slopes: list[float] = field(default_factory=list)
    superpolynomial: bool = False

    def to_dict(self) -> dict[str, Any]:
        return {
            "rho": self.rho,
            "sse": self.sse,
            "intercept": self.intercept,
            "fit_radii": list(self.fit_radii),
            "local_slopes": list(self.local_slopes),
            "superpolynomial": self.superpolynomial,
        }


def nudge_radius(pe: PoleEnumerator, r: float, lo: float, hi: float) -> float:
    """
    Radius in [lo, hi] farthest from every enumerated pole modulus; ties go to the one
    nearest ``r``.
    """
    if isinstance(pe, NoPoles) or hi <= lo:
        return r
    locations, _ = pe.enumerate(hi)
    moduli = np.sort(np.abs(locations))
    moduli = moduli[moduli >= lo - (hi - lo)]
    if moduli.size == 0:
        return r
    candidates = [r, lo, hi]
    candidates.extend(float(x) for x in (moduli[1:] + moduli[:-1]) / 2.0 if lo <= x <= hi)

    def score(candidate: float) -> tuple[float, float]:
        return (float(np.min(np.abs(moduli - candidate))), -abs(candidate - r))

    best = max(candidates, key=score)
    if best != r:
        logger.debug("Nudged radius %.15g -> %.15g (clearance %.3g)", r, best, score(best)[0])
    return best


def _nudged_radii(
    pe: PoleEnumerator, radii: Sequence[float], config: QuadratureConfig
) -> list[float]:
    nudged = []
    for i, r in enumerate(radii):
        lo, hi = r * (1.0 - config.nudge), r * (1.0 + config.nudge)
        if i > 0:
            lo = max(lo, (radii[i - 1] + r) / 2.0)
        if i + 1 < len(radii):
            hi = min(hi, math.nextafter((r + radii[i + 1]) / 2.0, 0.0))
        chosen = nudge_radius(pe, r, lo, hi)
        locations, _ = pe.enumerate(hi)
        if locations.size:
            gap = float(np.min(np.abs(np.abs(locations) - chosen)))
            if gap < config.pole_guard:
                logger.warning("Radius %.15g stays within %.3g of a pole", chosen, gap)
        nudged.append(chosen)
    return nudged


def characteristic(
    f: Expr,
    pe: PoleEnumerator,
    radii: Sequence[float],
    config: Optional[QuadratureConfig] = None,
    *,
    label: str = "",
) -> GrowthCurve:
    """T(r) = m(r) + N(r) at each radius, with radii nudged away from enumerated poles."""
    config = config or QuadratureConfig()
    radii = [float(r) for r in radii]
    if not radii:
        raise ConstraintViolationError("At least one radius is required.")
    if radii[0] <= 0 or any(b <= a for a, b in zip(radii, radii[1:])):
        raise ConstraintViolationError("Radii must be positive and strictly increasing.")

    actual = _nudged_radii(pe, radii, config)

    def measure(r: float) -> GrowthRecord:
        m = proximity(
            f,
            r,
            config.quad_order,
            tol=config.tol,
            max_doublings=config.max_doublings,
            pole_guard=config.pole_guard,
        )
        n = counting(pe, r)
        return GrowthRecord(r=r, m=m, N=n, T=m + n)

    if config.max_workers > 1:
        with ThreadPoolExecutor(max_workers=config.max_workers) as pool:
            records = tuple(pool.map(measure, actual))
    else:
        records = tuple(measure(r) for r in actual)

    for before, after in zip(records, records[1:]):
        if after.T < before.T - config.tol * max(abs(before.T), 1.0):
            logger.warning("T decreases between r=%g and r=%g", before.r, after.r)
    logger.info("Characteristic computed at %d radii", len(records))
    return GrowthCurve(records, label=label)


def local_slopes(radii: np.ndarray, values: np.ndarray) -> np.ndarray:
    """Point-to-point d log T / d log r."""
    return np.diff(np.log(values)) / np.diff(np.log(radii))


def order_estimate(curve: GrowthCurve) -> OrderEstimate:
    """
    Least-squares slope of log T against log r over the upper half of the radii.

    The point-to-point slopes over the whole curve are reported too; a strictly
    increasing sequence is taken as evidence of super-polynomial growth.
    """
    usable = [record for record in curve.records if record.T > 0]
    if len(usable) < MIN_ORDER_RECORDS:
        raise DegenerateCurveError(
            f"Order fit needs {MIN_ORDER_RECORDS} records with T > 0, got {len(usable)}."
        )
    radii = np.array([record.r for record in usable])
    values = np.array([record.T for record in usable])
    if np.ptp(values) <= 1e-15 * float(np.max(np.abs(values))):
        raise DegenerateCurveError("All characteristic values are equal; no order to fit.")

    top = slice(len(usable) // 2, None)
    x, y = np.log(radii[top]), np.log(values[top])
    (slope, intercept), sse, *_ = np.polyfit(x, y, 1, full=True)
    slopes = local_slopes(radii, values)
    estimate = OrderEstimate(
        rho=float(slope),
        sse=float(sse[0]) if len(sse) else 0.0,
        intercept=float(intercept),
        fit_radii=[float(r) for r in radii[top]],
        local_slopes=[float(s) for s in slopes],
        superpolynomial=bool(np.all(np.diff(slopes) > 0)),
    )
    logger.info("Order estimate rho=%.6g (sse %.3g)", estimate.rho, estimate.sse)
    return estimate
