from __future__ import annotations

import math
from functools import cache
from typing import Optional

import numpy as np

from fermatfe.errors import PoleOverflowError

from .lattice import Lattice, equianharmonic_lattice, reduce_many

DEFAULT_POLE_GUARD = 1e-6
HALVING_FRACTION = 0.35
SERIES_TOLERANCE = 1e-13
COEFFICIENT_TABLE_SIZE = 120


@cache
def laurent_coefficients(size: int = COEFFICIENT_TABLE_SIZE) -> np.ndarray:
    """
    Coefficients c_k of ℘(z) = z⁻² + Σ_{k≥2} c_k z^{2k−2} for g₂ = 0, g₃ = 1.

    c₂ = g₂/20 = 0, c₃ = g₃/28, and for k ≥ 4
    c_k = 3 / ((2k + 1)(k − 3)) · Σ_{m=2}^{k−2} c_m c_{k−m}.
    Only every third coefficient is nonzero.
    """
    c = np.zeros(size)
    c[3] = 1.0 / 28.0
    for k in range(4, size):
        acc = math.fsum(c[m] * c[k - m] for m in range(2, k - 1))
        c[k] = 3.0 * acc / ((2 * k + 1) * (k - 3))
    c.setflags(write=False)
    return c


def series_terms(radius: float) -> int:
    """
    Number of table entries needed so the relative tail of z²·℘(z) stays below
    SERIES_TOLERANCE for |z| ≤ radius.
    """
    c = laurent_coefficients()
    rho2 = radius * radius
    previous = None
    for k in range(3, c.size, 3):
        term = abs(c[k]) * rho2**k
        if previous is not None and previous > 0:
            ratio = term / previous
            if ratio < 1.0 and term * ratio / (1.0 - ratio) < SERIES_TOLERANCE:
                return k + 1
        previous = term
    raise ValueError(f"Coefficient table too short for radius {radius}")


def _laurent(w: np.ndarray, terms: int) -> tuple[np.ndarray, np.ndarray]:
    c = laurent_coefficients()[:terms]
    u = w * w
    # P(u) = Σ c_k u^k and Q(u) = Σ (k − 1) c_k u^(k−2), evaluated by Horner
    p_coeffs = c[::-1]
    q_coeffs = (np.arange(terms) - 1.0)[2:][::-1] * c[2:][::-1]
    series = np.polyval(p_coeffs, u)
    derivative = np.polyval(q_coeffs, u)
    value = (1.0 + series) / u
    slope = 2.0 * w * (derivative - 1.0 / (u * u))
    return value, slope


def _duplicate(p: np.ndarray, dp: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """℘(2z), ℘′(2z) from ℘(z), ℘′(z), using ℘″ = 6℘² (g₂ = 0)."""
    p2 = p * p
    p3 = p2 * p
    dp2 = dp * dp
    doubled = 9.0 * p2 * p2 / dp2 - 2.0 * p
    doubled_slope = 18.0 * p3 / dp - 54.0 * p3 * p3 / (dp2 * dp) - dp
    return doubled, doubled_slope


def wp_pair_array(
    z,
    *,
    lattice: Optional[Lattice] = None,
    pole_guard: float = DEFAULT_POLE_GUARD,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Vectorized ℘ and ℘′ for the equianharmonic lattice.

    Points are reduced to the nearest-lattice-point cell, halved k times until
    |z| < 0.35·|ω₁|, summed with the Laurent series and duplicated back k times.
    Entries whose reduced argument lies within ``pole_guard`` of the lattice (or that are
    not finite) come back as nan in both arrays.
    """
    lattice = lattice or equianharmonic_lattice()
    z = np.asarray(z, dtype=complex)
    reduced, _ = reduce_many(z, lattice)
    radius = np.abs(reduced)
    with np.errstate(invalid="ignore"):
        guarded = ~np.isfinite(radius) | (radius < pole_guard)
    threshold = HALVING_FRACTION * abs(lattice.omega1)

    safe_radius = np.where(guarded, threshold / 2.0, radius)
    halvings = np.zeros(z.shape, dtype=np.int64)
    outside = safe_radius >= threshold
    halvings[outside] = np.floor(np.log2(safe_radius[outside] / threshold)).astype(np.int64) + 1
    w = np.where(guarded, threshold / 2.0, reduced) / np.exp2(halvings)

    terms = series_terms(threshold)
    with np.errstate(all="ignore"):
        value, slope = _laurent(w, terms)
        for step in range(int(halvings.max(initial=0))):
            active = halvings > step
            value[active], slope[active] = _duplicate(value[active], slope[active])

    value[guarded] = np.nan
    slope[guarded] = np.nan
    return value, slope


def _scalar(z: complex, index: int, pole_guard: float) -> complex:
    pair = wp_pair_array(np.array([complex(z)]), pole_guard=pole_guard)
    result = complex(pair[index][0])
    if not (math.isfinite(result.real) and math.isfinite(result.imag)):
        raise PoleOverflowError(f"z = {complex(z)} is inside the pole guard of ℘", complex(z))
    return result


def wp(z: complex, *, pole_guard: float = DEFAULT_POLE_GUARD) -> complex:
    return _scalar(z, 0, pole_guard)


def wp_prime(z: complex, *, pole_guard: float = DEFAULT_POLE_GUARD) -> complex:
    return _scalar(z, 1, pole_guard)
