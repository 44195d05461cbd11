"""Input validation utilities for gauge-frontier.

These helpers parse and check command-line arguments. They raise
``ValidationError`` naming the violated precondition so that the CLI can
report it and exit with status 2.
"""

import json
import re
from typing import Any

import numpy as np
from numpy.typing import NDArray

from .exceptions import ValidationError


_IDENTITY_PATTERN = re.compile(r"^I(\d*)$")


def parse_matrix(text: str, name: str = "matrix") -> NDArray[np.complex128]:
    """Parse a matrix argument.

    Accepts ``I`` / ``I<n>`` for an identity, a JSON number, a JSON list, or
    a JSON object ``{"re": [...], "im": [...]}``. The identity size defaults
    to one when omitted.
    """
    stripped = text.strip()
    identity = _IDENTITY_PATTERN.match(stripped)
    if identity:
        return np.eye(int(identity.group(1) or 1), dtype=complex)
    try:
        document: Any = json.loads(stripped)
    except json.JSONDecodeError as e:
        raise ValidationError(
            f"{name} must be JSON or an identity token", name, text, "JSON or I<n>"
        ) from e
    try:
        if isinstance(document, dict):
            real = np.asarray(document.get("re", 0.0), dtype=float)
            imag = np.asarray(document.get("im", np.zeros_like(real)), dtype=float)
            matrix = real + 1j * imag
        else:
            matrix = np.asarray(document, dtype=complex)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{name} is not numeric", name, text) from e
    return np.atleast_2d(matrix)


def parse_vector(text: str, name: str = "vector") -> NDArray[np.float64]:
    """Parse a comma-separated or JSON list of real numbers."""
    stripped = text.strip()
    try:
        if stripped.startswith("["):
            values = np.asarray(json.loads(stripped), dtype=float)
        else:
            values = np.asarray([float(v) for v in stripped.split(",") if v.strip()], dtype=float)
    except (TypeError, ValueError) as e:
        raise ValidationError(f"{name} must be a list of numbers", name, text) from e
    if values.ndim != 1 or values.size == 0:
        raise ValidationError(f"{name} must be a nonempty list", name, text)
    return values


def parse_int_list(text: str, name: str = "list") -> list[int]:
    values = parse_vector(text, name)
    if not np.all(values == np.round(values)):
        raise ValidationError(f"{name} must contain integers", name, text)
    return [int(v) for v in values]
