"""
Textual s-expression form of Expr, used by the CLI ``--fn``/``--h`` flags and in reports.

Grammar::

    expr    := "z" | NUMBER | "(" head expr* ")"
    NUMBER  := a Python complex literal without spaces: 2, -0.5, 1e-3, 3j, 1+2j
    head    := const NUMBER        constant
             | add expr expr+      left-folded sum
             | mul expr expr+      left-folded product
             | pow expr INT        nonzero integer power
             | exp expr | sin expr | cos expr
             | poly NUMBER+        coefficients, lowest degree first
             | wp expr | wpp expr  ℘ and ℘′ of the equianharmonic lattice
             | shift expr NUMBER   expr evaluated at z + NUMBER
"""

from __future__ import annotations

import re

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

_TOKEN = re.compile(r"\(|\)|[^\s()]+")

_UNARY = {"exp": Exp, "sin": Sin, "cos": Cos, "wp": WP, "wpp": WPPrime}
_UNARY_NAMES = {cls: name for name, cls in _UNARY.items()}


def format_number(value: complex) -> str:
    value = complex(value)
    if value.imag == 0.0:
        return repr(value.real)
    return repr(value).strip("()")


def to_sexpr(expr: Expr) -> str:
    if isinstance(expr, Variable):
        return "z"
    if isinstance(expr, Constant):
        return f"(const {format_number(expr.value)})"
    if isinstance(expr, Add):
        return f"(add {to_sexpr(expr.left)} {to_sexpr(expr.right)})"
    if isinstance(expr, Mul):
        return f"(mul {to_sexpr(expr.left)} {to_sexpr(expr.right)})"
    if isinstance(expr, Pow):
        return f"(pow {to_sexpr(expr.base)} {expr.exponent})"
    if isinstance(expr, Polynomial):
        return "(poly " + " ".join(format_number(c) for c in expr.coefficients) + ")"
    if isinstance(expr, Shift):
        return f"(shift {to_sexpr(expr.expr)} {format_number(expr.offset)})"
    name = _UNARY_NAMES.get(type(expr))
    if name is not None:
        return f"({name} {to_sexpr(expr.arg)})"
    raise MalformedExpressionError(f"Cannot serialize node of type {type(expr).__name__}.")


def _parse_number(token: str) -> complex:
    try:
        return complex(token)
    except ValueError as exc:
        raise MalformedExpressionError(f"Expected a number, got {token!r}.") from exc


class _Parser:
    def __init__(self, text: str):
        self.tokens = _TOKEN.findall(text)
        self.pos = 0

    def _next(self) -> str:
        if self.pos >= len(self.tokens):
            raise MalformedExpressionError("Unexpected end of expression.")
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def _peek(self) -> str | None:
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _expect_close(self) -> None:
        token = self._next()
        if token != ")":
            raise MalformedExpressionError(f"Expected ')', got {token!r}.")

    def parse(self) -> Expr:
        expr = self._expr()
        if self.pos != len(self.tokens):
            raise MalformedExpressionError(f"Trailing input: {self._peek()!r}.")
        return expr

    def _expr(self) -> Expr:
        token = self._next()
        if token == ")":
            raise MalformedExpressionError("Unexpected ')'.")
        if token != "(":
            if token == "z":
                return Variable()
            return Constant(_parse_number(token))
        head = self._next()
        if head == "const":
            node: Expr = Constant(_parse_number(self._next()))
        elif head in ("add", "mul"):
            operands = [self._expr()]
            while self._peek() not in (")", None):
                operands.append(self._expr())
            if len(operands) < 2:
                raise MalformedExpressionError(f"'{head}' needs at least two operands.")
            combine = Add if head == "add" else Mul
            node = operands[0]
            for operand in operands[1:]:
                node = combine(node, operand)
        elif head == "pow":
            base = self._expr()
            raw = self._next()
            try:
                exponent = int(raw)
            except ValueError as exc:
                message = f"Pow exponent must be an int: {raw!r}."
                raise MalformedExpressionError(message) from exc
            node = Pow(base, exponent)
        elif head == "poly":
            coefficients = []
            while self._peek() not in (")", None):
                coefficients.append(_parse_number(self._next()))
            node = Polynomial(tuple(coefficients))
        elif head == "shift":
            inner = self._expr()
            node = Shift(inner, _parse_number(self._next()))
        elif head in _UNARY:
            node = _UNARY[head](self._expr())
        else:
            raise MalformedExpressionError(f"Unknown head {head!r}.")
        self._expect_close()
        return node


def parse_sexpr(text: str) -> Expr:
    return _Parser(text).parse()
