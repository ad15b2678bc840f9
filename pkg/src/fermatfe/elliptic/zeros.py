from __future__ import annotations

import logging
from functools import cache

import numpy as np
from scipy import optimize

from fermatfe.errors import PoleOverflowError

from .lattice import Lattice, equianharmonic_lattice, lattice_coordinates, reduce
from .weierstrass import wp, wp_prime

logger = logging.getLogger(__name__)

DEDUPE_SPACING = 1e-8
ROOT_RESIDUAL = 1e-10


def _to_cell(z: complex, lattice: Lattice) -> complex:
    """Representative of z in the half-open period parallelogram [0,1)·ω₁ + [0,1)·ω₂."""
    x, y = lattice_coordinates(np.array([z]), lattice)
    fx = float(x[0] - np.floor(x[0]))
    fy = float(y[0] - np.floor(y[0]))
    # snap coordinates that round up to 1.0 back onto the closed edge
    fx = 0.0 if fx > 1.0 - 1e-12 else fx
    fy = 0.0 if fy > 1.0 - 1e-12 else fy
    return fx * lattice.omega1 + fy * lattice.omega2


def _newton_root(seed: complex) -> complex | None:
    try:
        root = optimize.newton(wp, seed, fprime=wp_prime, tol=1e-14, maxiter=60)
    except (PoleOverflowError, RuntimeError, ZeroDivisionError, OverflowError):
        return None
    root = complex(root)
    try:
        if abs(wp(root)) > ROOT_RESIDUAL:
            return None
    except PoleOverflowError:
        return None
    return root


def find_wp_zeros(lattice: Lattice | None = None, grid: int = 6) -> tuple[complex, ...]:
    """
    Cell-wide Newton search for the zeros of ℘.

    Seeds sit at the centres of a grid × grid subdivision of the period parallelogram;
    converged roots are mapped into the parallelogram and merged when they agree modulo
    the lattice to within DEDUPE_SPACING.
    """
    lattice = lattice or equianharmonic_lattice()
    found: list[complex] = []
    for i in range(grid):
        for j in range(grid):
            seed = ((i + 0.5) / grid) * lattice.omega1 + ((j + 0.5) / grid) * lattice.omega2
            root = _newton_root(seed)
            if root is None:
                continue
            root = _to_cell(root, lattice)
            if any(
                abs(reduce(root - known, lattice).reduced) < DEDUPE_SPACING for known in found
            ):
                continue
            found.append(root)
    found.sort(key=lambda r: (round(r.real, 9), round(r.imag, 9)))
    logger.debug("Zero search found %d zeros of ℘ per cell", len(found))
    return tuple(found)


@cache
def wp_zeros() -> tuple[complex, ...]:
    """Cached zeros of ℘ in the period parallelogram of the equianharmonic lattice."""
    return find_wp_zeros(equianharmonic_lattice())
