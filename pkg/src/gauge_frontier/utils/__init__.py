"""Utility modules for gauge-frontier.

This package provides the exception hierarchy, output formatting and
argument validation shared by the numerical core and the CLI.
"""

from .exceptions import (
    BudgetExhaustedError,
    ConfigurationError,
    GaugeFrontierError,
    InstanceTooLargeError,
    InvalidLawError,
    NoPairError,
    NumericalError,
    QuadratureError,
    SandwichViolationError,
    UnsupportedSpecError,
    ValidationError,
    VerificationFailedError,
)
from .formatters import (
    dump_json,
    emit,
    format_csv,
    format_document,
    format_error_response,
    serialize_dict,
    serialize_value,
)
from .validators import (
    parse_int_list,
    parse_matrix,
    parse_vector,
)


__all__ = [
    # Exceptions
    "GaugeFrontierError",
    "ValidationError",
    "InvalidLawError",
    "NoPairError",
    "UnsupportedSpecError",
    "InstanceTooLargeError",
    "ConfigurationError",
    "NumericalError",
    "QuadratureError",
    "BudgetExhaustedError",
    "SandwichViolationError",
    "VerificationFailedError",
    # Formatters
    "serialize_value",
    "serialize_dict",
    "format_document",
    "format_csv",
    "format_error_response",
    "dump_json",
    "emit",
    # Validators
    "parse_matrix",
    "parse_vector",
    "parse_int_list",
]
