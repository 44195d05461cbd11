"""Output formatting utilities for gauge-frontier.

Results are emitted either as one JSON document ``{"command", "config",
"data"}`` or as CSV with a leading ``# config:`` comment line. Neither form
contains timestamps, so reruns with the same configuration produce
byte-identical output.
"""

import json
import math
import sys
from collections.abc import Sequence
from enum import Enum
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np


def serialize_value(value: Any) -> Any:
    """Serialize a value to JSON-compatible format.

    Args:
        value: Value to serialize

    Returns:
        JSON-serializable value; non-finite floats become ``None``
    """
    if value is None or isinstance(value, bool | str):
        return value
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, int | np.integer):
        return int(value)
    if isinstance(value, Fraction):
        return int(value) if value.denominator == 1 else float(value)
    if isinstance(value, float | np.floating):
        number = float(value)
        return number if math.isfinite(number) else None
    if isinstance(value, complex | np.complexfloating):
        return [serialize_value(value.real), serialize_value(value.imag)]
    if isinstance(value, Enum):
        return serialize_value(value.value)
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, np.ndarray):
        return serialize_value(value.tolist())
    if isinstance(value, list | tuple | set | frozenset):
        return [serialize_value(item) for item in value]
    if isinstance(value, dict):
        return serialize_dict(value)
    if hasattr(value, "to_dict"):
        return serialize_value(value.to_dict())
    return str(value)


def serialize_dict(data: dict[Any, Any]) -> dict[str, Any]:
    return {str(key): serialize_value(value) for key, value in data.items()}


def format_document(command: str, config: dict[str, Any], data: Any) -> dict[str, Any]:
    """Result document carrying the full resolved request."""
    return {"command": command, "config": serialize_dict(config), "data": serialize_value(data)}


def dump_json(document: Any) -> str:
    """Stable JSON text: insertion-ordered keys, shortest round-trip floats."""
    return json.dumps(serialize_value(document), indent=2, allow_nan=False) + "\n"


def _csv_cell(value: Any) -> str:
    value = serialize_value(value)
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return "%.12g" % value
    if isinstance(value, list | dict):
        return json.dumps(value, separators=(",", ":"))
    return str(value)


def format_csv(
    rows: Sequence[dict[str, Any]],
    config: dict[str, Any],
    columns: Sequence[str] | None = None,
) -> str:
    """CSV text with a ``# config: {json}`` header line.

    Args:
        rows: One mapping per row
        config: Resolved request embedded in the comment line
        columns: Column order (defaults to the keys of the first row)

    Returns:
        CSV text ending in a newline
    """
    header = list(columns) if columns is not None else (list(rows[0]) if rows else [])
    lines = ["# config: " + json.dumps(serialize_dict(config), separators=(",", ":"))]
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(_csv_cell(row.get(column)) for column in header))
    return "\n".join(lines) + "\n"


def format_error_response(
    error_code: str, message: str, details: dict[str, Any] | None = None
) -> dict[str, Any]:
    """Format error responses in consistent structure.

    Args:
        error_code: Standardized error code
        message: Human-readable error message
        details: Optional additional error details

    Returns:
        Formatted error response dictionary
    """
    error_info: dict[str, Any] = {"code": error_code, "message": message}
    if details:
        error_info["details"] = serialize_dict(details)
    return {"error": error_info}


def emit(text: str, out: str | Path | None = None) -> None:
    """Write ``text`` to ``out`` or, without a path, to stdout."""
    if out is None or str(out) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    Path(out).write_text(text)
