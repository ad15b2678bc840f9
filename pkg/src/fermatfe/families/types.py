from __future__ import annotations

import json
from dataclasses import dataclass, field
import sys
from enum import Enum

if sys.version_info >= (3, 11):
    from enum import StrEnum
else:  # pragma: no cover - Python 3.10 compatibility with 3.11 StrEnum semantics

    class StrEnum(str, Enum):
        __str__ = str.__str__
        __format__ = str.__format__

        @staticmethod
        def _generate_next_value_(name, start, count, last_values):
            return name.lower()
from typing import Any, Literal, Optional

from fermatfe.errors import ConstraintViolationError
from fermatfe.expr import Expr, parse_sexpr, to_sexpr
from fermatfe.jsonio import SCHEMA_VERSION, complex_from_json, complex_to_json

EquationKind = Literal["ode", "difference", "unit", "pair"]

ETA_TOL = 1e-12


class FamilyKind(StrEnum):
    PROP1A = "Prop1A"
    PROP1B = "Prop1B"
    THM2A = "Thm2A"
    THM2A_DEGENERATE = "Thm2A_degenerate"
    THM2B_TRIG = "Thm2B_trig"
    THM2_SCALED_EXP = "Thm2_scaledExp"
    DIFF_TRIVIAL = "DiffTrivial"
    EQ5_PAIR = "Eq5Pair"
    EXAMPLE4 = "Example4"
    EXAMPLE5A = "Example5a"
    EXAMPLE5B = "Example5b"
    EXAMPLE6A = "Example6a"
    EXAMPLE6B = "Example6b"
    ANTI_PERIODIC_N1 = "AntiPeriodicN1"


_COMPLEX_FIELDS = ("alpha", "beta", "c", "a", "b", "d", "eta")
_EXPR_FIELDS = ("h", "delta")


@dataclass(frozen=True, slots=True)
class FamilySpec:
    """Tagged description of one solution family and its scalar parameters."""

    kind: FamilyKind
    n: Optional[int] = None
    alpha: complex = 0j
    beta: complex = 0j
    c: Optional[complex] = None
    a: complex = 0j
    b: complex = 0j
    d: Optional[complex] = None
    eta: complex = 1 + 0j
    h: Optional[Expr] = None
    delta: Optional[Expr] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", FamilyKind(self.kind))
        for name in _COMPLEX_FIELDS:
            value = getattr(self, name)
            if value is not None:
                object.__setattr__(self, name, complex(value))
        if self.n is not None and (
            isinstance(self.n, bool) or not isinstance(self.n, int) or self.n < 1
        ):
            raise ConstraintViolationError(f"n must be a positive integer, got {self.n!r}.")
        if abs(self.eta**3 - 1.0) > ETA_TOL:
            raise ConstraintViolationError(f"eta must be a cube root of unity, got {self.eta}.")

    def to_dict(self) -> dict[str, Any]:
        payload: dict[str, Any] = {"schema": SCHEMA_VERSION, "kind": self.kind.value}
        if self.n is not None:
            payload["n"] = self.n
        for name in _COMPLEX_FIELDS:
            value = getattr(self, name)
            if value is not None:
                payload[name] = complex_to_json(value)
        for name in _EXPR_FIELDS:
            value = getattr(self, name)
            if value is not None:
                payload[name] = to_sexpr(value)
        return payload

    @classmethod
    def from_dict(cls, payload: dict[str, Any]) -> "FamilySpec":
        if not isinstance(payload, dict):
            raise ConstraintViolationError("Family spec must be a JSON object.")
        schema = payload.get("schema", SCHEMA_VERSION)
        if schema != SCHEMA_VERSION:
            raise ConstraintViolationError(f"Unsupported family spec schema {schema!r}.")
        unknown = set(payload) - {"schema", "kind", "n", *_COMPLEX_FIELDS, *_EXPR_FIELDS}
        if unknown:
            raise ConstraintViolationError(f"Unknown family spec keys: {sorted(unknown)}.")
        if "kind" not in payload:
            raise ConstraintViolationError("Family spec is missing 'kind'.")
        try:
            kind = FamilyKind(payload["kind"])
        except ValueError as exc:
            raise ConstraintViolationError(f"Unknown family kind {payload['kind']!r}.") from exc
        kwargs: dict[str, Any] = {"kind": kind}
        if "n" in payload:
            kwargs["n"] = payload["n"]
        try:
            for name in _COMPLEX_FIELDS:
                if payload.get(name) is not None:
                    kwargs[name] = complex_from_json(payload[name])
        except ValueError as exc:
            raise ConstraintViolationError(str(exc)) from exc
        for name in _EXPR_FIELDS:
            raw = payload.get(name)
            if raw is None:
                continue
            if not isinstance(raw, str):
                raise ConstraintViolationError(
                    f"Family spec field {name!r} must be an s-expression string, "
                    f"got {type(raw).__name__}."
                )
            kwargs[name] = parse_sexpr(raw)
        return cls(**kwargs)

    @classmethod
    def from_json(cls, text: str) -> "FamilySpec":
        try:
            payload = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConstraintViolationError(f"Family spec is not valid JSON: {exc.msg}") from exc
        return cls.from_dict(payload)


@dataclass(frozen=True, slots=True)
class EquationMode:
    kind: EquationKind
    n: int
    c: Optional[complex] = None

    def describe(self) -> str:
        if self.kind == "difference":
            return f"difference n={self.n} c={self.c}"
        return f"{self.kind} n={self.n}"


@dataclass(frozen=True, slots=True)
class GeneratedFamily:
    spec: FamilySpec
    f: Expr
    mode: EquationMode
    alpha: complex
    beta: complex
    g: Optional[Expr] = None
    notes: tuple[str, ...] = field(default_factory=tuple)
