from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterator, Optional

from fermatfe.errors import ConstraintViolationError

DEGENERACY_TOL = 1e-12
_TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, slots=True)
class ScaleSolutions:
    """
    Solutions d of a scale constraint dⁿ·K = 1, ordered by argument in [0, 2π).

    An empty result carries ``witness``, the reason the constraint has no solution.
    """

    roots: tuple[complex, ...]
    witness: Optional[str] = None

    @property
    def degenerate(self) -> bool:
        return not self.roots

    def __iter__(self) -> Iterator[complex]:
        return iter(self.roots)

    def __len__(self) -> int:
        return len(self.roots)

    def __bool__(self) -> bool:
        return bool(self.roots)

    def __getitem__(self, index: int) -> complex:
        return self.roots[index]


def _argument(value: complex) -> float:
    angle = cmath.phase(value) % _TWO_PI
    if angle > _TWO_PI - 1e-12:
        angle = 0.0
    return angle


def nth_roots(value: complex, n: int) -> tuple[complex, ...]:
    """All n solutions of wⁿ = value: principal root times the n-th roots of unity."""
    if n < 1:
        raise ConstraintViolationError(f"n must be a positive integer, got {n}.")
    principal = complex(value) ** (1.0 / n)
    roots = [principal * cmath.exp(2j * math.pi * k / n) for k in range(n)]
    return tuple(sorted(roots, key=_argument))


def _require_positive(n: int) -> None:
    if isinstance(n, bool) or not isinstance(n, int) or n < 1:
        raise ConstraintViolationError(f"n must be a positive integer, got {n!r}.")


def admissible_scale_ode(n: int, alpha: complex) -> ScaleSolutions:
    """Solutions of dⁿ·(1 + (α/n)ⁿ) = 1; empty when α = n·e^{(2k+1)πi/n}."""
    _require_positive(n)
    alpha = complex(alpha)
    factor = 1.0 + (alpha / n) ** n
    if abs(factor) < DEGENERACY_TOL:
        k = round((cmath.phase(alpha) * n / math.pi - 1.0) / 2.0) % n
        witness = f"alpha = {n}*exp((2*{k}+1)*pi*i/{n}) makes 1 + (alpha/n)^n vanish"
        return ScaleSolutions(roots=(), witness=witness)
    return ScaleSolutions(roots=nth_roots(1.0 / factor, n))


def admissible_scale_diff(n: int, alpha: complex, c: complex) -> ScaleSolutions:
    """Solutions of dⁿ·(1 + e^{αc}) = 1; empty when e^{αc} = −1."""
    _require_positive(n)
    c = complex(c)
    if c == 0:
        raise ConstraintViolationError("The shift c must be nonzero.")
    factor = 1.0 + cmath.exp(complex(alpha) * c)
    if abs(factor) < DEGENERACY_TOL:
        witness = "exp(alpha*c) = -1 makes 1 + exp(alpha*c) vanish"
        return ScaleSolutions(roots=(), witness=witness)
    return ScaleSolutions(roots=nth_roots(1.0 / factor, n))
