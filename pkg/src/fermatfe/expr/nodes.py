from __future__ import annotations

import numbers
from dataclasses import dataclass
from typing import Union

from fermatfe.errors import MalformedExpressionError

Number = Union[int, float, complex]


class Expr:
    """
    Base of the immutable expression tree for functions of the single variable z.

    Subclasses are frozen dataclasses; the arithmetic operators build new trees and never
    simplify, so ``a - b`` becomes ``Add(a, Mul(Constant(-1), b))``.
    """

    __slots__ = ()

    @staticmethod
    def _coerce(other: Union["Expr", Number]) -> "Expr":
        if isinstance(other, Expr):
            return other
        if isinstance(other, numbers.Number) and not isinstance(other, bool):
            return Constant(complex(other))
        raise MalformedExpressionError(f"Cannot use {type(other).__name__} as an expression.")

    def __add__(self, other):
        return Add(self, self._coerce(other))

    def __radd__(self, other):
        return Add(self._coerce(other), self)

    def __sub__(self, other):
        return Add(self, Mul(Constant(-1), self._coerce(other)))

    def __rsub__(self, other):
        return Add(self._coerce(other), Mul(Constant(-1), self))

    def __mul__(self, other):
        return Mul(self, self._coerce(other))

    def __rmul__(self, other):
        return Mul(self._coerce(other), self)

    def __truediv__(self, other):
        return Mul(self, Pow(self._coerce(other), -1))

    def __rtruediv__(self, other):
        return Mul(self._coerce(other), Pow(self, -1))

    def __neg__(self):
        return Mul(Constant(-1), self)

    def __pow__(self, exponent: int):
        return Pow(self, exponent)

    def shift(self, offset: Number) -> "Shift":
        return Shift(self, complex(offset))


@dataclass(frozen=True, slots=True)
class Constant(Expr):
    value: complex

    def __post_init__(self):
        object.__setattr__(self, "value", complex(self.value))


@dataclass(frozen=True, slots=True)
class Variable(Expr):
    pass


@dataclass(frozen=True, slots=True)
class Add(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Mul(Expr):
    left: Expr
    right: Expr


@dataclass(frozen=True, slots=True)
class Pow(Expr):
    base: Expr
    exponent: int

    def __post_init__(self):
        if isinstance(self.exponent, bool) or not isinstance(self.exponent, int):
            raise MalformedExpressionError(
                f"Pow exponent must be an integer, got {self.exponent!r}."
            )
        if self.exponent == 0:
            raise MalformedExpressionError("Pow exponent must be nonzero.")


@dataclass(frozen=True, slots=True)
class Exp(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Sin(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Cos(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Polynomial(Expr):
    """Coefficients lowest degree first."""

    coefficients: tuple[complex, ...]

    def __post_init__(self):
        coefficients = tuple(complex(c) for c in self.coefficients)
        if not coefficients:
            raise MalformedExpressionError("Polynomial needs at least one coefficient.")
        object.__setattr__(self, "coefficients", coefficients)


@dataclass(frozen=True, slots=True)
class WP(Expr):
    """Weierstrass ℘ of the equianharmonic lattice, composed with ``arg``."""

    arg: Expr


@dataclass(frozen=True, slots=True)
class WPPrime(Expr):
    arg: Expr


@dataclass(frozen=True, slots=True)
class Shift(Expr):
    """``expr`` evaluated at z + offset."""

    expr: Expr
    offset: complex

    def __post_init__(self):
        object.__setattr__(self, "offset", complex(self.offset))


Z = Variable()

NODE_TYPES: tuple[type[Expr], ...] = (
    Constant,
    Variable,
    Add,
    Mul,
    Pow,
    Exp,
    Sin,
    Cos,
    Polynomial,
    WP,
    WPPrime,
    Shift,
)


def const(value: Number) -> Constant:
    return Constant(complex(value))


def children(expr: Expr) -> tuple[Expr, ...]:
    if isinstance(expr, (Add, Mul)):
        return (expr.left, expr.right)
    if isinstance(expr, Pow):
        return (expr.base,)
    if isinstance(expr, (Exp, Sin, Cos, WP, WPPrime)):
        return (expr.arg,)
    if isinstance(expr, Shift):
        return (expr.expr,)
    if isinstance(expr, (Constant, Variable, Polynomial)):
        return ()
    raise MalformedExpressionError(f"Unknown expression node {type(expr).__name__}.")


def walk(expr: Expr):
    """Yield every node of the tree, parents before children."""
    stack = [expr]
    while stack:
        node = stack.pop()
        yield node
        stack.extend(reversed(children(node)))


def is_entire(expr: Expr) -> bool:
    """True when the tree contains no ℘, ℘′ or reciprocal nodes."""
    for node in walk(expr):
        if isinstance(node, (WP, WPPrime)):
            return False
        if isinstance(node, Pow) and node.exponent < 0:
            return False
    return True
