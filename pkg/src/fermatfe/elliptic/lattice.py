from __future__ import annotations

import cmath
import logging
import math
from dataclasses import dataclass
from functools import cache

import numpy as np
from scipy import integrate

logger = logging.getLogger(__name__)

TIE_RTOL = 1e-12


@dataclass(frozen=True, slots=True)
class Lattice:
    """Period lattice of ℘ with (℘′)² = 4℘³ − 1; omega1 is real and positive."""

    omega1: complex
    omega2: complex
    area: float
    e1: float
    half_period: float

    @property
    def circumradius(self) -> float:
        """Circumradius of the hexagonal Voronoi cell."""
        return abs(self.omega1) / math.sqrt(3.0)


@dataclass(frozen=True, slots=True)
class CellReduction:
    reduced: complex
    lattice_point: complex
    m: int
    n: int


def _real_half_period(e1: float) -> float:
    """
    Compute ∫_{e1}^{∞} dt / √(4t³ − 1) with the substitution t = e1/u².

    The integrand becomes 2·e1 / √(1 − u⁶) on (0, 1]; the (1 − u)^(−1/2) endpoint
    factor is handed to QUADPACK as an algebraic weight.
    """

    def smooth_part(u: float) -> float:
        return 2.0 * e1 / math.sqrt(1.0 + u + u**2 + u**3 + u**4 + u**5)

    value, abserr = integrate.quad(
        smooth_part, 0.0, 1.0, weight="alg", wvar=(0.0, -0.5), epsabs=1e-15, epsrel=1e-14
    )
    logger.debug("Real half-period %.17g (quadrature error estimate %.3g)", value, abserr)
    return value


@cache
def equianharmonic_lattice() -> Lattice:
    """Return the cached lattice for g₂ = 0, g₃ = 1."""
    e1 = 4.0 ** (-1.0 / 3.0)
    half = _real_half_period(e1)
    omega1 = complex(2.0 * half, 0.0)
    omega2 = omega1 * cmath.exp(1j * math.pi / 3.0)
    area = abs((omega1.conjugate() * omega2).imag)
    return Lattice(omega1=omega1, omega2=omega2, area=area, e1=e1, half_period=half)


def lattice_coordinates(z, lattice: Lattice) -> tuple[np.ndarray, np.ndarray]:
    """Real coordinates (x, y) with z = x·ω₁ + y·ω₂."""
    z = np.asarray(z, dtype=complex)
    y = z.imag / lattice.omega2.imag
    x = (z.real - y * lattice.omega2.real) / lattice.omega1.real
    return x, y


def reduce_many(z, lattice: Lattice) -> tuple[np.ndarray, np.ndarray]:
    """
    Vectorized cell reduction: returns (reduced, lattice_point) arrays.

    The nearest lattice point is a vertex of the containing period rhombus, so only the
    four vertices are compared. They are visited in lexicographic (m, n) order; a later vertex
    replaces the current one only when it is closer by more than a relative ``TIE_RTOL``, so
    exact geometric ties (the zeros of ℘ are three-way ties) keep the first vertex.
    """
    z = np.asarray(z, dtype=complex)
    x, y = lattice_coordinates(z, lattice)
    with np.errstate(invalid="ignore"):
        m0 = np.floor(x)
        n0 = np.floor(y)
    best_point = np.full(z.shape, np.nan + 0j, dtype=complex)
    best_distance = np.full(z.shape, np.inf)
    for dm, dn in ((0, 0), (0, 1), (1, 0), (1, 1)):
        point = (m0 + dm) * lattice.omega1 + (n0 + dn) * lattice.omega2
        distance = np.abs(z - point)
        closer = distance < best_distance * (1.0 - TIE_RTOL)
        best_point = np.where(closer, point, best_point)
        best_distance = np.where(closer, distance, best_distance)
    return z - best_point, best_point


def reduce(z: complex, lattice: Lattice | None = None) -> CellReduction:
    lattice = lattice or equianharmonic_lattice()
    reduced, point = reduce_many(np.array([complex(z)]), lattice)
    px, py = lattice_coordinates(point, lattice)
    return CellReduction(
        reduced=complex(reduced[0]),
        lattice_point=complex(point[0]),
        m=int(round(float(px[0]))),
        n=int(round(float(py[0]))),
    )


def lattice_points_in_disc(
    lattice: Lattice, radius: float, center: complex = 0j
) -> np.ndarray:
    """All lattice points p with |p − center| ≤ radius, ordered by row (n) then column (m)."""
    if radius < 0:
        raise ValueError("radius must be non-negative")
    center = complex(center)
    w1 = lattice.omega1.real
    w2 = lattice.omega2
    n_lo = math.floor((center.imag - radius) / w2.imag) - 1
    n_hi = math.ceil((center.imag + radius) / w2.imag) + 1
    rows = np.arange(n_lo, n_hi + 1)
    dy = rows * w2.imag - center.imag
    span_sq = radius * radius - dy * dy
    keep = span_sq >= 0
    rows, span = rows[keep], np.sqrt(span_sq[keep])
    if rows.size == 0:
        return np.empty(0, dtype=complex)
    base = center.real - rows * w2.real
    m_lo = np.floor((base - span) / w1).astype(np.int64) - 1
    m_hi = np.ceil((base + span) / w1).astype(np.int64) + 1
    counts = m_hi - m_lo + 1
    row_index = np.repeat(rows, counts)
    starts = np.repeat(m_lo, counts)
    offsets = np.arange(int(counts.sum())) - np.repeat(np.cumsum(counts) - counts, counts)
    cols = starts + offsets
    points = cols * lattice.omega1 + row_index * w2
    return points[np.abs(points - center) <= radius]
