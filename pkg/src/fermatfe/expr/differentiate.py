from __future__ import annotations

from functools import singledispatch

from fermatfe.errors import MalformedExpressionError

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


@singledispatch
def differentiate(node: Expr) -> Expr:
    """Exact derivative d/dz of the tree; no simplification is attempted."""
    raise MalformedExpressionError(f"Cannot differentiate node of type {type(node).__name__}.")


@differentiate.register
def _(node: Constant) -> Expr:
    return Constant(0)


@differentiate.register
def _(node: Variable) -> Expr:
    return Constant(1)


@differentiate.register
def _(node: Add) -> Expr:
    return Add(differentiate(node.left), differentiate(node.right))


@differentiate.register
def _(node: Mul) -> Expr:
    return Add(
        Mul(differentiate(node.left), node.right),
        Mul(node.left, differentiate(node.right)),
    )


@differentiate.register
def _(node: Pow) -> Expr:
    inner = differentiate(node.base)
    if node.exponent == 1:
        return inner
    return Mul(Mul(Constant(node.exponent), Pow(node.base, node.exponent - 1)), inner)


@differentiate.register
def _(node: Exp) -> Expr:
    return Mul(node, differentiate(node.arg))


@differentiate.register
def _(node: Sin) -> Expr:
    return Mul(Cos(node.arg), differentiate(node.arg))


@differentiate.register
def _(node: Cos) -> Expr:
    return Mul(Mul(Constant(-1), Sin(node.arg)), differentiate(node.arg))


@differentiate.register
def _(node: Polynomial) -> Expr:
    coefficients = node.coefficients
    if len(coefficients) == 1:
        return Constant(0)
    return Polynomial(tuple(k * coefficients[k] for k in range(1, len(coefficients))))


@differentiate.register
def _(node: WP) -> Expr:
    return Mul(WPPrime(node.arg), differentiate(node.arg))


@differentiate.register
def _(node: WPPrime) -> Expr:
    # (℘′)² = 4℘³ − 1  ⇒  ℘″ = 6℘²
    return Mul(Mul(Constant(6), Pow(WP(node.arg), 2)), differentiate(node.arg))


@differentiate.register
def _(node: Shift) -> Expr:
    return Shift(differentiate(node.expr), node.offset)
