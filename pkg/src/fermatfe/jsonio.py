from __future__ import annotations

import json
import math
from typing import Any

SCHEMA_VERSION = 1
SIGNIFICANT_DIGITS = 15


def round_sig(value: float) -> float:
    """Round a float to 15 significant digits (non-finite values pass through)."""
    if not math.isfinite(value):
        return value
    return float(format(value, f".{SIGNIFICANT_DIGITS}g"))


def format_sig(value: float) -> str:
    return format(value, f".{SIGNIFICANT_DIGITS}g")


def complex_to_json(value: complex) -> list[float]:
    value = complex(value)
    return [round_sig(value.real), round_sig(value.imag)]


def complex_from_json(raw: Any) -> complex:
    """
    Accept a JSON number, a [re, im] pair, or a Python complex literal string.
    """
    if isinstance(raw, bool):
        raise ValueError("Booleans are not complex values.")
    if isinstance(raw, (int, float)):
        return complex(raw)
    if isinstance(raw, (list, tuple)):
        if len(raw) != 2:
            raise ValueError(f"Complex pair must have two entries, got {len(raw)}.")
        return complex(float(raw[0]), float(raw[1]))
    if isinstance(raw, str):
        try:
            return complex(raw.replace(" ", ""))
        except ValueError as exc:
            raise ValueError(f"Not a complex literal: {raw!r}") from exc
    raise ValueError(f"Cannot read a complex value from {type(raw).__name__}.")


def to_jsonable(value: Any) -> Any:
    """Recursively convert report payloads: complex -> [re, im], floats -> 15 digits."""
    if isinstance(value, bool) or value is None or isinstance(value, (int, str)):
        return value
    if isinstance(value, float):
        return round_sig(value)
    if isinstance(value, complex):
        return complex_to_json(value)
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    # numpy scalars
    if hasattr(value, "item"):
        return to_jsonable(value.item())
    raise TypeError(f"Cannot serialize {type(value).__name__}")


def dump_document(payload: dict[str, Any]) -> str:
    document = {"schema": SCHEMA_VERSION}
    document.update(payload)
    return json.dumps(to_jsonable(document), indent=2, allow_nan=True)
