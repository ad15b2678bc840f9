from __future__ import annotations

import cmath
import logging
import math
from typing import Callable, Optional

import numpy as np

from fermatfe.errors import ConstraintViolationError, DegenerateParameterError
from fermatfe.expr import WP, Constant, Cos, Exp, Expr, Polynomial, Pow, Sin, WPPrime, Z
from fermatfe.expr import evaluate_array

from .scales import admissible_scale_diff, admissible_scale_ode
from .types import EquationMode, FamilyKind, FamilySpec, GeneratedFamily

logger = logging.getLogger(__name__)

SQRT3_OVER_3 = math.sqrt(3.0) / 3.0
PARAMETER_TOL = 1e-12
SCALE_TOL = 1e-10
ANTI_PERIODIC_SAMPLES = 200
ANTI_PERIODIC_TOL = 1e-9

EXAMPLE4_SHIFT = complex(0.0, math.pi)
EXAMPLE5_SHIFT = complex(math.pi / 2.0, 0.0)
EXAMPLE6_SHIFT = complex(0.0, math.pi)


def affine(slope: complex, intercept: complex = 0j) -> Polynomial:
    """slope·z + intercept as a degree-one polynomial node."""
    return Polynomial((complex(intercept), complex(slope)))


def exp_affine(slope: complex, intercept: complex = 0j) -> Exp:
    return Exp(affine(slope, intercept))


def tan_half(h: Expr) -> Expr:
    """tan(h/2) = sin(h/2)·cos(h/2)⁻¹, the Möbius parameter giving sin h and cos h."""
    half = Constant(0.5) * h
    return Sin(half) * Pow(Cos(half), -1)


def eq5_forms(h: Expr, eta: complex, alpha: complex, beta: complex) -> tuple[Expr, Expr]:
    """
    The two expressions built from h through the n = 3 unit pair:

        f(z)   = ½ (1 + s℘′(h)) / ℘(h) · e^{(αz+β)/3}
        f(z+c) = η/2 (1 − s℘′(h)) / ℘(h) · e^{(αz+β)/3},   s = √3/3
    """
    f_unit, g_unit = _cubic_unit_pair(h, eta)
    scale = exp_affine(complex(alpha) / 3.0, complex(beta) / 3.0)
    return f_unit * scale, g_unit * scale


def _cubic_unit_pair(h: Expr, eta: complex) -> tuple[Expr, Expr]:
    s = Constant(SQRT3_OVER_3)
    reciprocal = Pow(WP(h), -1)
    f = Constant(0.5) * (Constant(1) + s * WPPrime(h)) * reciprocal
    g = Constant(complex(eta) / 2.0) * (Constant(1) - s * WPPrime(h)) * reciprocal
    return f, g


def prop1_unit_pair(n: int, h_or_omega: Expr, eta: complex = 1 + 0j) -> tuple[Expr, Expr]:
    """Nonconstant pair (f, g) with fⁿ + gⁿ = 1 for n = 2 (Möbius in ω) or n = 3 (℘ in h)."""
    if n == 2:
        omega = h_or_omega
        denominator = Pow(Constant(1) + omega * omega, -1)
        f = Constant(2) * omega * denominator
        g = (Constant(1) - omega * omega) * denominator
        return f, g
    if n == 3:
        if abs(complex(eta) ** 3 - 1.0) > PARAMETER_TOL:
            raise ConstraintViolationError(f"eta must satisfy eta^3 = 1, got {eta}.")
        return _cubic_unit_pair(h_or_omega, eta)
    raise ConstraintViolationError(f"Unit pairs exist only for n = 2 or n = 3, got n = {n}.")


def _require_n(spec: FamilySpec, expected: int) -> int:
    if spec.n is not None and spec.n != expected:
        raise ConstraintViolationError(
            f"{spec.kind.value} requires n = {expected}, got {spec.n}."
        )
    return expected


def _fixed_shift(spec: FamilySpec, shift: complex) -> complex:
    if spec.c is not None and abs(spec.c - shift) > PARAMETER_TOL:
        raise ConstraintViolationError(
            f"{spec.kind.value} uses the fixed shift c = {shift}, got {spec.c}."
        )
    return shift


def _require_periodic_exponential(spec: FamilySpec, shift: complex) -> None:
    if abs(cmath.exp(spec.alpha * shift) - 1.0) > PARAMETER_TOL:
        raise ConstraintViolationError(
            f"{spec.kind.value} needs exp(alpha*c) = 1 for c = {shift}; "
            f"alpha = {spec.alpha} gives {cmath.exp(spec.alpha * shift)}."
        )


def _require_h(spec: FamilySpec) -> Expr:
    if spec.h is None:
        raise ConstraintViolationError(f"{spec.kind.value} needs an expression h.")
    return spec.h


def _choose_scale(spec: FamilySpec, roots, constraint: Callable[[complex], complex]) -> complex:
    if not roots:
        raise DegenerateParameterError(
            f"{spec.kind.value}: the scale constraint has no solution ({roots.witness}).",
            witness=roots.witness or "",
        )
    if spec.d is None:
        return roots[0]
    residual = abs(constraint(spec.d) - 1.0)
    if residual > SCALE_TOL:
        raise ConstraintViolationError(
            f"{spec.kind.value}: d = {spec.d} violates its scale constraint "
            f"(residual {residual:.3g})."
        )
    return spec.d


def _prop1a(spec: FamilySpec) -> GeneratedFamily:
    _require_n(spec, 2)
    f, g = prop1_unit_pair(2, _require_h(spec))
    return GeneratedFamily(spec, f, EquationMode("unit", 2), 0j, 0j, g=g)


def _prop1b(spec: FamilySpec) -> GeneratedFamily:
    _require_n(spec, 3)
    f, g = prop1_unit_pair(3, _require_h(spec), spec.eta)
    return GeneratedFamily(spec, f, EquationMode("unit", 3), 0j, 0j, g=g)


def _thm2a(spec: FamilySpec) -> GeneratedFamily:
    _require_n(spec, 1)
    alpha, beta = spec.alpha, spec.beta
    if abs(alpha + 1.0) < PARAMETER_TOL:
        raise ConstraintViolationError("Thm2A needs alpha != -1; use Thm2A_degenerate.")
    particular = Constant(1.0 / (alpha + 1.0)) * exp_affine(alpha, beta)
    f = particular + Constant(spec.a) * exp_affine(-1)
    return GeneratedFamily(spec, f, EquationMode("ode", 1), alpha, beta)


def _thm2a_degenerate(spec: FamilySpec) -> GeneratedFamily:
    _require_n(spec, 1)
    if abs(spec.alpha + 1.0) > PARAMETER_TOL:
        raise ConstraintViolationError("Thm2A_degenerate is the alpha = -1 branch.")
    f = Z * exp_affine(-1, spec.beta) + Constant(spec.a) * exp_affine(-1)
    return GeneratedFamily(spec, f, EquationMode("ode", 1), -1 + 0j, spec.beta)


def _thm2b_trig(spec: FamilySpec) -> GeneratedFamily:
    _require_n(spec, 2)
    if abs(spec.alpha) > PARAMETER_TOL:
        raise ConstraintViolationError("Thm2B_trig exists only for alpha = 0.")
    f = Constant(cmath.exp(spec.beta / 2.0)) * Sin(affine(1, spec.b))
    return GeneratedFamily(spec, f, EquationMode("ode", 2), 0j, spec.beta)


def _thm2_scaled_exp(spec: FamilySpec) -> GeneratedFamily:
    if spec.n is None:
        raise ConstraintViolationError("Thm2_scaledExp needs n.")
    n, alpha = spec.n, spec.alpha
    roots = admissible_scale_ode(n, alpha)
    d = _choose_scale(spec, roots, lambda d: d**n * (1.0 + (alpha / n) ** n))
    f = Constant(d) * exp_affine(alpha / n, spec.beta / n)
    return GeneratedFamily(spec, f, EquationMode("ode", n), alpha, spec.beta)


def _diff_trivial(spec: FamilySpec) -> GeneratedFamily:
    if spec.n is None or spec.c is None:
        raise ConstraintViolationError("DiffTrivial needs n and c.")
    n, alpha, c = spec.n, spec.alpha, spec.c
    roots = admissible_scale_diff(n, alpha, c)
    d = _choose_scale(spec, roots, lambda d: d**n * (1.0 + cmath.exp(alpha * c)))
    f = Constant(d) * exp_affine(alpha / n, spec.beta / n)
    return GeneratedFamily(spec, f, EquationMode("difference", n, c), alpha, spec.beta)


def _eq5_pair(spec: FamilySpec) -> GeneratedFamily:
    _require_n(spec, 3)
    f, g = eq5_forms(_require_h(spec), spec.eta, spec.alpha, spec.beta)
    return GeneratedFamily(spec, f, EquationMode("pair", 3, spec.c), spec.alpha, spec.beta, g=g)


def _example4(spec: FamilySpec) -> GeneratedFamily:
    _require_n(spec, 3)
    c = _fixed_shift(spec, EXAMPLE4_SHIFT)
    _require_periodic_exponential(spec, c)
    h = spec.h if spec.h is not None else Exp(Z)
    if h != Exp(Z):
        raise ConstraintViolationError("Example4 is defined through h(z) = e^z.")
    # with h(z + πi) = −h(z) the second form is f(z + c) exactly when η = e^{αc/3}
    shift_root = cmath.exp(spec.alpha * c / 3.0)
    if abs(spec.eta - shift_root) > SCALE_TOL:
        raise ConstraintViolationError(
            f"Example4 with alpha = {spec.alpha} needs eta = e^(alpha c/3) = {shift_root:.15g}."
        )
    f, g = eq5_forms(h, spec.eta, spec.alpha, spec.beta)
    return GeneratedFamily(
        spec, f, EquationMode("difference", 3, c), spec.alpha, spec.beta, g=g
    )


def _example5(spec: FamilySpec, argument: Expr) -> GeneratedFamily:
    _require_n(spec, 2)
    c = _fixed_shift(spec, EXAMPLE5_SHIFT)
    _require_periodic_exponential(spec, c)
    f = exp_affine(spec.alpha / 2.0, spec.beta / 2.0) * Sin(argument)
    return GeneratedFamily(spec, f, EquationMode("difference", 2, c), spec.alpha, spec.beta)


def _example6(spec: FamilySpec, leading: Expr) -> GeneratedFamily:
    _require_n(spec, 1)
    c = _fixed_shift(spec, EXAMPLE6_SHIFT)
    _require_periodic_exponential(spec, c)
    f = leading + Constant(0.5) * exp_affine(spec.alpha, spec.beta)
    return GeneratedFamily(spec, f, EquationMode("difference", 1, c), spec.alpha, spec.beta)


def check_anti_periodic(delta: Expr, c: complex, *, seed: int = 0) -> float:
    """
    Largest relative |δ(z+c) + δ(z)| over paired samples in the disc |z| ≤ 2;
    raises ConstraintViolationError above ANTI_PERIODIC_TOL.
    """
    rng = np.random.Generator(np.random.Philox(key=seed))
    radius = 2.0 * np.sqrt(rng.random(ANTI_PERIODIC_SAMPLES))
    angle = 2.0 * np.pi * rng.random(ANTI_PERIODIC_SAMPLES)
    points = radius * np.exp(1j * angle)
    here = evaluate_array(delta, points)
    there = evaluate_array(delta, points + c)
    scale = np.maximum(np.maximum(np.abs(here), np.abs(there)), 1.0)
    violation = np.abs(there + here) / scale
    finite = np.isfinite(violation)
    if not finite.any():
        raise ConstraintViolationError("delta could not be evaluated at any sample point.")
    worst = float(violation[finite].max())
    if worst > ANTI_PERIODIC_TOL:
        logger.warning("delta fails anti-periodicity: worst relative violation %.3g", worst)
        raise ConstraintViolationError(
            f"delta(z + c) = -delta(z) fails: worst relative violation {worst:.3g}."
        )
    return worst


def _anti_periodic_n1(spec: FamilySpec) -> GeneratedFamily:
    _require_n(spec, 1)
    if spec.c is None or spec.c == 0:
        raise ConstraintViolationError("AntiPeriodicN1 needs a nonzero shift c.")
    if spec.delta is None:
        raise ConstraintViolationError("AntiPeriodicN1 needs an anti-periodic delta.")
    alpha, beta, c = spec.alpha, spec.beta, spec.c
    check_anti_periodic(spec.delta, c)
    rhs = exp_affine(alpha, beta)
    if abs(cmath.exp(alpha * c) + 1.0) < PARAMETER_TOL:
        f = spec.delta - affine(1.0 / c) * rhs
        notes = ("exp(alpha*c) = -1 branch: f = delta - (z/c) exp(alpha z + beta)",)
    else:
        roots = admissible_scale_diff(1, alpha, c)
        d = _choose_scale(spec, roots, lambda d: d * (1.0 + cmath.exp(alpha * c)))
        f = spec.delta + Constant(d) * rhs
        notes = ("f = delta + d exp(alpha z + beta) with d (1 + exp(alpha c)) = 1",)
    return GeneratedFamily(
        spec, f, EquationMode("difference", 1, c), alpha, beta, notes=notes
    )


_BUILDERS: dict[FamilyKind, Callable[[FamilySpec], GeneratedFamily]] = {
    FamilyKind.PROP1A: _prop1a,
    FamilyKind.PROP1B: _prop1b,
    FamilyKind.THM2A: _thm2a,
    FamilyKind.THM2A_DEGENERATE: _thm2a_degenerate,
    FamilyKind.THM2B_TRIG: _thm2b_trig,
    FamilyKind.THM2_SCALED_EXP: _thm2_scaled_exp,
    FamilyKind.DIFF_TRIVIAL: _diff_trivial,
    FamilyKind.EQ5_PAIR: _eq5_pair,
    FamilyKind.EXAMPLE4: _example4,
    FamilyKind.EXAMPLE5A: lambda spec: _example5(spec, Z),
    FamilyKind.EXAMPLE5B: lambda spec: _example5(spec, exp_affine(4j) + Z),
    FamilyKind.EXAMPLE6A: lambda spec: _example6(spec, Exp(Z)),
    FamilyKind.EXAMPLE6B: lambda spec: _example6(spec, Exp(exp_affine(2) + Z)),
    FamilyKind.ANTI_PERIODIC_N1: _anti_periodic_n1,
}

FAMILY_DESCRIPTIONS: dict[FamilyKind, str] = {
    FamilyKind.PROP1A: "f = 2w/(1+w^2), g = (1-w^2)/(1+w^2); f^2 + g^2 = 1",
    FamilyKind.PROP1B: "f = (1 + s wp'(h))/(2 wp(h)), g = eta (1 - s wp'(h))/(2 wp(h))",
    FamilyKind.THM2A: "f = e^(az+b)/(a+1) + A e^-z; f + f' = e^(az+b)",
    FamilyKind.THM2A_DEGENERATE: "f = z e^(-z+b) + A e^-z; f + f' = e^(-z+b)",
    FamilyKind.THM2B_TRIG: "f = e^(b/2) sin(z + B); f^2 + f'^2 = e^b",
    FamilyKind.THM2_SCALED_EXP: "f = d e^((az+b)/n) with d^n (1 + (a/n)^n) = 1",
    FamilyKind.DIFF_TRIVIAL: "f = d e^((az+b)/n) with d^n (1 + e^(ac)) = 1",
    FamilyKind.EQ5_PAIR: "both cubic forms built from h; f^3 + g^3 = e^(az+b)",
    FamilyKind.EXAMPLE4: "cubic form with h = e^z, c = pi i; infinite order",
    FamilyKind.EXAMPLE5A: "f = e^((az+b)/2) sin z, c = pi/2",
    FamilyKind.EXAMPLE5B: "f = e^((az+b)/2) sin(e^(4iz) + z), c = pi/2; infinite order",
    FamilyKind.EXAMPLE6A: "f = e^z + e^(az+b)/2, c = i pi",
    FamilyKind.EXAMPLE6B: "f = e^(e^(2z)+z) + e^(az+b)/2, c = i pi; infinite order",
    FamilyKind.ANTI_PERIODIC_N1: "f = delta + d e^(az+b) or delta - (z/c) e^(az+b); n = 1",
}


def generate(spec: FamilySpec) -> GeneratedFamily:
    """Build the expression(s) of one solution family and the equation it solves."""
    builder: Optional[Callable[[FamilySpec], GeneratedFamily]] = _BUILDERS.get(spec.kind)
    if builder is None:  # pragma: no cover - every kind is registered
        raise ConstraintViolationError(f"No generator for {spec.kind}.")
    family = builder(spec)
    logger.debug("Generated %s solving %s", spec.kind.value, family.mode.describe())
    return family
