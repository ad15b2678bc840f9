from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from typing import Literal, Optional, Protocol, Union

import numpy as np
from scipy import optimize

from fermatfe.elliptic import (
    Lattice,
    equianharmonic_lattice,
    lattice_points_in_disc,
    reduce_many,
    wp_zeros,
)
from fermatfe.errors import (
    ConstraintViolationError,
    PoleAtOriginError,
    PoleOverflowError,
    UnsupportedFamilyError,
)
from fermatfe.expr import (
    WP,
    Exp,
    Expr,
    Polynomial,
    Variable,
    differentiate,
    evaluate,
    evaluate_array,
    is_entire,
)
from fermatfe.families import FamilyKind, FamilySpec, generate

logger = logging.getLogger(__name__)

ORIGIN_TOL = 1e-12
DEDUPE_SPACING = 1e-8
WINDING_NODES = 64
WINDING_RADIUS = 1e-3

HKind = Literal["affine", "exp"]


class PoleEnumerator(Protocol):
    def enumerate(self, r: float) -> tuple[np.ndarray, np.ndarray]:
        """Pole locations with |p| ≤ r and their multiplicities."""
        ...


@dataclass(frozen=True, slots=True)
class NoPoles:
    def enumerate(self, r: float) -> tuple[np.ndarray, np.ndarray]:
        return np.empty(0, dtype=complex), np.empty(0, dtype=np.int64)


@dataclass(frozen=True, slots=True)
class LatticeDoublePoles:
    """Double poles of ℘ at every lattice point, the origin included."""

    lattice: Lattice = field(default_factory=equianharmonic_lattice)

    def enumerate(self, r: float) -> tuple[np.ndarray, np.ndarray]:
        points = lattice_points_in_disc(self.lattice, r)
        return points, np.full(points.shape, 2, dtype=np.int64)


@dataclass(frozen=True, slots=True)
class PreimageOfLattice:
    """
    Solutions of h(z) ∈ Λ + offset for h(z) = a·z + b ("affine") or h(z) = e^{az+b} ("exp").

    For the exponential case every point q ≠ 0 of the shifted lattice contributes the
    branch family z = (log q − b + 2πik)/a.
    """

    kind: HKind
    a: complex
    b: complex = 0j
    lattice: Lattice = field(default_factory=equianharmonic_lattice)
    offset: complex = 0j
    multiplicity: int = 2

    def __post_init__(self):
        if self.kind not in ("affine", "exp"):
            raise ConstraintViolationError(f"Unknown h variant {self.kind!r}.")
        for name in ("a", "b", "offset"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.a == 0:
            raise ConstraintViolationError("h must be nonconstant (a != 0).")

    def enumerate(self, r: float) -> tuple[np.ndarray, np.ndarray]:
        reach = abs(self.a) * r + abs(self.b)
        if self.kind == "affine":
            targets = self._targets(reach, center=self.b)
            points = (targets - self.b) / self.a
        else:
            targets = self._targets(math.exp(reach))
            targets = targets[np.abs(targets) > 0]
            with np.errstate(divide="ignore"):
                logs = np.log(targets)
            logs = logs[np.abs(logs.real) <= reach]
            turns = math.ceil(reach / (2.0 * math.pi)) + 1
            k = np.arange(-turns, turns + 1)
            branches = logs[:, None] + 2j * math.pi * k[None, :]
            points = ((branches - self.b) / self.a).ravel()
        points = points[np.abs(points) <= r]
        points = points[np.lexsort((points.imag, points.real, np.abs(points)))]
        return points, np.full(points.shape, self.multiplicity, dtype=np.int64)

    def _targets(self, radius: float, center: complex = 0j) -> np.ndarray:
        # lattice points q + offset with |q + offset − center| ≤ radius
        shifted = lattice_points_in_disc(self.lattice, radius, center=center - self.offset)
        return shifted + self.offset


@dataclass(frozen=True, slots=True)
class ExplicitList:
    """A finite pole list, complete inside the disc |z| ≤ coverage."""

    poles: tuple[tuple[complex, int], ...]
    coverage: float

    def enumerate(self, r: float) -> tuple[np.ndarray, np.ndarray]:
        if r > self.coverage * (1.0 + 1e-12):
            raise ConstraintViolationError(
                f"Pole list covers |z| <= {self.coverage}; radius {r} requested."
            )
        if not self.poles:
            return NoPoles().enumerate(r)
        locations = np.array([p for p, _ in self.poles], dtype=complex)
        multiplicity = np.array([m for _, m in self.poles], dtype=np.int64)
        keep = np.abs(locations) <= r
        return locations[keep], multiplicity[keep]


AnyEnumerator = Union[NoPoles, LatticeDoublePoles, PreimageOfLattice, ExplicitList]


def counting(pe: PoleEnumerator, r: float) -> float:
    """
    N(r) = Σ_{0<|p|≤r} mult(p)·log(r/|p|).

    ℘'s own double pole at the origin enters through the usual n(0)·log r term; for any
    other enumerator a pole at the origin raises PoleAtOriginError.
    """
    if not r > 0:
        raise ConstraintViolationError(f"Radius must be positive, got {r}.")
    locations, multiplicity = pe.enumerate(r)
    moduli = np.abs(locations)
    at_origin = moduli < ORIGIN_TOL
    origin_term = 0.0
    if at_origin.any():
        if not isinstance(pe, LatticeDoublePoles):
            raise PoleAtOriginError("The counting function does not support a pole at z = 0.")
        origin_term = float(multiplicity[at_origin].sum()) * math.log(r)
    terms = multiplicity[~at_origin] * np.log(r / moduli[~at_origin])
    return math.fsum(terms.tolist()) + origin_term


def clearance(pe: PoleEnumerator, r: float, band: float) -> float:
    """Distance from the circle |z| = r to the nearest pole with ||p| − r| ≤ band."""
    locations, _ = pe.enumerate(r + band)
    moduli = np.abs(locations)
    near = np.abs(moduli - r)
    near = near[near <= band]
    return float(near.min()) if near.size else math.inf


def _affine_parts(h: Expr) -> Optional[tuple[complex, complex]]:
    if isinstance(h, Variable):
        return 1 + 0j, 0j
    if isinstance(h, Polynomial) and len(h.coefficients) == 2 and h.coefficients[1] != 0:
        return complex(h.coefficients[1]), complex(h.coefficients[0])
    return None


def h_variant(h: Expr) -> Optional[tuple[HKind, complex, complex]]:
    """Classify h as a·z + b or e^{az+b}; None for anything else."""
    parts = _affine_parts(h)
    if parts is not None:
        return ("affine", *parts)
    if isinstance(h, Exp):
        parts = _affine_parts(h.arg)
        if parts is not None:
            return ("exp", *parts)
    return None


def winding_multiplicity(f: Expr, center: complex, radius: float = WINDING_RADIUS) -> int:
    """Pole order at ``center`` from the winding number of f on a small circle."""
    theta = 2.0 * np.pi * np.arange(WINDING_NODES + 1) / WINDING_NODES
    values = evaluate_array(f, center + radius * np.exp(1j * theta))
    if not np.isfinite(values).all():
        raise PoleOverflowError(f"Winding circle around {center} hits a singularity.", center)
    turns = (np.unwrap(np.angle(values))[-1] - np.angle(values[0])) / (2.0 * np.pi)
    return int(round(-turns))


def _polish(h: Expr, seed: complex) -> Optional[complex]:
    target = WP(h)
    slope = differentiate(target)
    try:
        root = optimize.newton(
            lambda z: evaluate(target, z),
            seed,
            fprime=lambda z: evaluate(slope, z),
            tol=1e-14,
            maxiter=50,
        )
    except (PoleOverflowError, RuntimeError, ZeroDivisionError, OverflowError):
        logger.debug("Newton polishing failed from seed %s", seed)
        return None
    return complex(root)


def _dedupe(points: list[complex]) -> list[complex]:
    kept: list[complex] = []
    for point in sorted(points, key=lambda p: (abs(p), p.real, p.imag)):
        if all(abs(point - other) >= DEDUPE_SPACING for other in kept):
            kept.append(point)
    return kept


def eq5_pole_list(f: Expr, h: Expr, radius: float) -> ExplicitList:
    """
    Poles of the cubic form built from h inside |z| ≤ radius.

    Candidates are the preimages under h of the lattice and of both zero classes of ℘,
    found in closed form for affine or exponential h; zero preimages are polished by
    Newton on ℘(h(z)) and every pole order comes from the argument principle.
    """
    variant = h_variant(h)
    if variant is None:
        raise UnsupportedFamilyError("Pole enumeration needs h affine or exponential.")
    kind, a, b = variant
    candidates: list[complex] = []
    for offset in (0j, *wp_zeros()):
        preimages = PreimageOfLattice(kind, a, b, offset=offset, multiplicity=1)
        seeds, _ = preimages.enumerate(radius)
        if offset == 0:
            candidates.extend(complex(s) for s in seeds)
            continue
        for seed in seeds:
            root = _polish(h, complex(seed))
            if root is not None and abs(root) <= radius:
                candidates.append(root)
    poles = []
    for pole in _dedupe(candidates):
        order = winding_multiplicity(f, pole)
        if order > 0:
            poles.append((pole, order))
    logger.debug("Enumerated %d poles of the cubic form within |z| <= %g", len(poles), radius)
    return ExplicitList(tuple(poles), coverage=radius)


_ENTIRE_KINDS = {
    FamilyKind.THM2A,
    FamilyKind.THM2A_DEGENERATE,
    FamilyKind.THM2B_TRIG,
    FamilyKind.THM2_SCALED_EXP,
    FamilyKind.DIFF_TRIVIAL,
    FamilyKind.EXAMPLE5A,
    FamilyKind.EXAMPLE5B,
    FamilyKind.EXAMPLE6A,
    FamilyKind.EXAMPLE6B,
}
_CUBIC_KINDS = {FamilyKind.PROP1B, FamilyKind.EQ5_PAIR, FamilyKind.EXAMPLE4}


def pole_enumerator_for(spec: FamilySpec, radius: float) -> AnyEnumerator:
    """Pole description of f = generate(spec).f, complete up to ``radius`` where finite."""
    family = generate(spec)
    if spec.kind in _ENTIRE_KINDS or is_entire(family.f):
        return NoPoles()
    if spec.kind in _CUBIC_KINDS:
        h = spec.h if spec.h is not None else Exp(Variable())
        return eq5_pole_list(family.f, h, radius)
    raise UnsupportedFamilyError(f"No pole description for family {spec.kind.value}.")


def pole_enumerator_for_expr(expr: Expr) -> AnyEnumerator:
    """Pole description for entire trees, ℘ itself, or ℘ of an affine or exponential h."""
    if is_entire(expr):
        return NoPoles()
    if isinstance(expr, WP):
        if isinstance(expr.arg, Variable):
            return LatticeDoublePoles()
        variant = h_variant(expr.arg)
        if variant is not None:
            kind, a, b = variant
            return PreimageOfLattice(kind, a, b)
    raise UnsupportedFamilyError(
        "Pole enumeration supports entire expressions and wp of affine or exponential h."
    )


def wp_zero_list(radius: float, lattice: Optional[Lattice] = None) -> ExplicitList:
    """Both zero classes of ℘ translated over the lattice, as simple poles of 1/℘."""
    lattice = lattice or equianharmonic_lattice()
    poles: list[tuple[complex, int]] = []
    for zero in wp_zeros():
        reduced, _ = reduce_many(np.array([zero]), lattice)
        translates = lattice_points_in_disc(lattice, radius, center=-complex(reduced[0]))
        for point in translates + complex(reduced[0]):
            poles.append((complex(point), 1))
    poles.sort(key=lambda item: (abs(item[0]), item[0].real, item[0].imag))
    return ExplicitList(tuple(poles), coverage=radius)
