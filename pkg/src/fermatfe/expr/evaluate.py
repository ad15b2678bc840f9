from __future__ import annotations

import math
from functools import singledispatch

import numpy as np

from fermatfe.elliptic.weierstrass import DEFAULT_POLE_GUARD, wp_pair_array
from fermatfe.errors import MalformedExpressionError, PoleOverflowError

from .nodes import (
    WP,
    Add,
    Constant,
    Cos,
    Exp,
    Expr,
    Mul,
    Polynomial,
    Pow,
    Shift,
    Sin,
    Variable,
    WPPrime,
)


def evaluate_array(expr: Expr, z, *, pole_guard: float = DEFAULT_POLE_GUARD) -> np.ndarray:
    """
    Evaluate ``expr`` at every point of ``z`` (any array shape).

    Points within ``pole_guard`` of a pole of a ℘/℘′ subterm or of a zero of a reciprocal's
    base, and points where the value overflows, come back as complex nan.
    """
    points = np.asarray(z, dtype=complex)
    with np.errstate(all="ignore"):
        values = np.asarray(_eval(expr, points, pole_guard), dtype=complex)
        values = np.broadcast_to(values, points.shape).copy()
        values[~np.isfinite(values)] = np.nan
    return values


def evaluate(expr: Expr, z: complex, *, pole_guard: float = DEFAULT_POLE_GUARD) -> complex:
    """Scalar evaluation; raises PoleOverflowError instead of returning a non-finite value."""
    value = complex(evaluate_array(expr, np.array([complex(z)]), pole_guard=pole_guard)[0])
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise PoleOverflowError(f"Pole overflow evaluating at z = {complex(z)}", complex(z))
    return value


@singledispatch
def _eval(node, z: np.ndarray, guard: float) -> np.ndarray:
    raise MalformedExpressionError(f"Cannot evaluate node of type {type(node).__name__}.")


@_eval.register
def _(node: Constant, z, guard):
    return np.full(z.shape, node.value, dtype=complex)


@_eval.register
def _(node: Variable, z, guard):
    return z


@_eval.register
def _(node: Add, z, guard):
    return _eval(node.left, z, guard) + _eval(node.right, z, guard)


@_eval.register
def _(node: Mul, z, guard):
    return _eval(node.left, z, guard) * _eval(node.right, z, guard)


@_eval.register
def _(node: Pow, z, guard):
    base = _eval(node.base, z, guard)
    if node.exponent > 0:
        return base**node.exponent
    near_zero = np.abs(base) < guard
    safe = np.where(near_zero, 1.0, base)
    result = 1.0 / safe ** (-node.exponent)
    result[near_zero] = np.nan
    return result


@_eval.register
def _(node: Exp, z, guard):
    return np.exp(_eval(node.arg, z, guard))


@_eval.register
def _(node: Sin, z, guard):
    return np.sin(_eval(node.arg, z, guard))


@_eval.register
def _(node: Cos, z, guard):
    return np.cos(_eval(node.arg, z, guard))


@_eval.register
def _(node: Polynomial, z, guard):
    result = np.zeros(z.shape, dtype=complex)
    for coefficient in reversed(node.coefficients):
        result = result * z + coefficient
    return result


@_eval.register
def _(node: WP, z, guard):
    value, _ = wp_pair_array(_eval(node.arg, z, guard), pole_guard=guard)
    return value


@_eval.register
def _(node: WPPrime, z, guard):
    _, slope = wp_pair_array(_eval(node.arg, z, guard), pole_guard=guard)
    return slope


@_eval.register
def _(node: Shift, z, guard):
    return _eval(node.expr, z + node.offset, guard)
