from __future__ import annotations

from typing import Optional


class FermatError(Exception):
    """Base class for every error raised by fermatfe."""


class MalformedExpressionError(FermatError, ValueError):
    """Expression tree or s-expression text is not well formed."""


class PoleOverflowError(FermatError, ArithmeticError):
    """Scalar evaluation hit the pole guard or overflowed; the caller must resample."""

    def __init__(self, message: str, point: Optional[complex] = None):
        super().__init__(message)
        self.point = point


class ConstraintViolationError(FermatError, ValueError):
    """A family or verification precondition does not hold."""


class DegenerateParameterError(ConstraintViolationError):
    """The scalar scale constraint has no solution for the given parameters."""

    def __init__(self, message: str, witness: str):
        super().__init__(message)
        self.witness = witness


class TooManyRejectionsError(FermatError, RuntimeError):
    """The sampler could not collect enough non-singular points."""


class QuadratureConvergenceError(FermatError, RuntimeError):
    """Circle quadrature did not converge; usually a pole sits on or near the circle."""


class PoleAtOriginError(FermatError, ValueError):
    """The counting function was asked to count a pole located at z = 0."""


class UnsupportedFamilyError(FermatError, ValueError):
    """No closed-form pole description is available for this function."""


class DegenerateCurveError(FermatError, ValueError):
    """A growth curve cannot support an order estimate."""
