"""Shared utilities for vpm-hilbert."""

import json
from typing import Any

import numpy as np
from pydantic import ValidationError


def format_validation_errors(e: ValidationError) -> str:
    """Format Pydantic validation errors into a user-friendly message."""
    errors = "; ".join(f"{'.'.join(str(p) for p in err['loc']) or 'input'}: {err['msg']}" for err in e.errors())
    return f"Invalid input: {errors}"


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars and arrays into plain Python values for JSON output."""
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, dict):
        return {k: to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, float) and not np.isfinite(value):
        return str(value)
    return value


def dumps(value: Any) -> str:
    """Serialize to deterministic JSON (floats use the shortest round-trip repr)."""
    return json.dumps(to_jsonable(value), sort_keys=True)


def format_float(value: float) -> str:
    """Format a float with 17 significant digits for CSV exports."""
    return f"{value:.17g}"
