from fermatfe.elliptic.weierstrass import DEFAULT_POLE_GUARD

from .differentiate import differentiate
from .evaluate import evaluate, evaluate_array
from .nodes import (
    NODE_TYPES,
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
    Z,
    const,
    is_entire,
    walk,
)
from .sexpr import parse_sexpr, to_sexpr

__all__ = [
    "DEFAULT_POLE_GUARD",
    "differentiate",
    "evaluate",
    "evaluate_array",
    "NODE_TYPES",
    "WP",
    "Add",
    "Constant",
    "Cos",
    "Exp",
    "Expr",
    "Mul",
    "Polynomial",
    "Pow",
    "Shift",
    "Sin",
    "Variable",
    "WPPrime",
    "Z",
    "const",
    "is_entire",
    "walk",
    "parse_sexpr",
    "to_sexpr",
]
