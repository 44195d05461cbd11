"""Custom exception hierarchy for gauge-frontier.

This module defines the exception hierarchy used across the numerical core
and the command line. Every error carries a stable error code and a details
dictionary so the CLI can emit structured error responses and map failures
onto its exit-code contract.
"""

from typing import Any


class GaugeFrontierError(Exception):
    """Base exception class for all gauge-frontier errors.

    Attributes:
        message: Human-readable error message
        error_code: Standardized error code for programmatic handling
        details: Additional error context and details
        exit_code: Process exit code used by the CLI
    """

    exit_code: int = 1

    def __init__(
        self,
        message: str,
        error_code: str = "GENERAL_ERROR",
        details: dict[str, Any] | None = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code
        self.details = details or {}

    def to_dict(self) -> dict[str, Any]:
        """Convert exception to dictionary for error responses."""
        return {
            "code": self.error_code,
            "message": self.message,
            "details": self.details,
        }


class ValidationError(GaugeFrontierError):
    """Raised when an operation's precondition is violated."""

    exit_code = 2

    def __init__(
        self,
        message: str,
        field_name: str | None = None,
        field_value: Any | None = None,
        validation_rule: str | None = None,
    ):
        details: dict[str, Any] = {}
        if field_name:
            details["field_name"] = field_name
        if field_value is not None:
            details["field_value"] = str(field_value)
        if validation_rule:
            details["validation_rule"] = validation_rule

        super().__init__(
            message=message, error_code="VALIDATION_ERROR", details=details
        )


class InvalidLawError(ValidationError):
    """Raised when a covariance or variance does not define a valid law."""

    def __init__(
        self,
        message: str,
        field_name: str | None = None,
        min_eigenvalue: float | None = None,
    ):
        super().__init__(message, field_name, None, "positive_definite")
        self.error_code = "INVALID_LAW_ERROR"
        if min_eigenvalue is not None:
            self.details["min_eigenvalue"] = min_eigenvalue


class NoPairError(ValidationError):
    """Raised when a pairwise quantity is requested for a single codeword."""

    def __init__(self, message: str = "no pair", k: int | None = None):
        super().__init__(message, "K", k, "K >= 2")
        self.error_code = "NO_PAIR_ERROR"


class UnsupportedSpecError(ValidationError):
    """Raised when an operation is not defined for a channel kind."""

    def __init__(
        self,
        message: str,
        kind: str | None = None,
        operation: str | None = None,
    ):
        super().__init__(message, "kind", kind, "supported_kind")
        self.error_code = "UNSUPPORTED_SPEC_ERROR"
        if operation:
            self.details["operation"] = operation


class InstanceTooLargeError(ValidationError):
    """Raised when an exhaustive search is requested beyond its cap."""

    def __init__(self, size: int, limit: int):
        super().__init__(
            f"Instance too large for exhaustive search: {size} > {limit}",
            "candidates",
            size,
            f"size <= {limit}",
        )
        self.error_code = "INSTANCE_TOO_LARGE_ERROR"


class ConfigurationError(GaugeFrontierError):
    """Raised when configuration is invalid or missing."""

    exit_code = 2

    def __init__(
        self,
        message: str,
        config_key: str | None = None,
        config_value: str | None = None,
    ):
        details: dict[str, Any] = {}
        if config_key:
            details["config_key"] = config_key
        if config_value:
            details["config_value"] = config_value

        super().__init__(
            message=message, error_code="CONFIGURATION_ERROR", details=details
        )


class NumericalError(GaugeFrontierError):
    """Base class for failures of a numerical procedure."""

    def __init__(
        self,
        message: str,
        procedure: str | None = None,
        details: dict[str, Any] | None = None,
    ):
        numerical_details = details or {}
        if procedure:
            numerical_details["procedure"] = procedure

        super().__init__(
            message=message, error_code="NUMERICAL_ERROR", details=numerical_details
        )


class QuadratureError(NumericalError):
    """Raised when adaptive quadrature misses its tolerance."""

    def __init__(
        self,
        message: str,
        abserr: float | None = None,
        tolerance: float | None = None,
    ):
        details: dict[str, Any] = {}
        if abserr is not None:
            details["abserr"] = abserr
        if tolerance is not None:
            details["tolerance"] = tolerance

        super().__init__(message, "quadrature", details)
        self.error_code = "QUADRATURE_ERROR"


class BudgetExhaustedError(NumericalError):
    """Raised when a sampling or evaluation budget runs out."""

    def __init__(self, message: str, budget: int | None = None):
        details: dict[str, Any] = {}
        if budget is not None:
            details["budget"] = budget

        super().__init__(message, "sampling", details)
        self.error_code = "BUDGET_EXHAUSTED_ERROR"


class SandwichViolationError(NumericalError):
    """Raised when a lower bound exceeds its matching upper bound."""

    def __init__(self, lower: float, upper: float, method: str | None = None):
        details: dict[str, Any] = {"lower": lower, "upper": upper}
        if method:
            details["method"] = method

        super().__init__(
            f"Lower bound {lower!r} exceeds upper bound {upper!r}",
            "sandwich",
            details,
        )
        self.error_code = "SANDWICH_VIOLATION_ERROR"


class VerificationFailedError(GaugeFrontierError):
    """Raised when a simulated error rate violates its analytic bound."""

    def __init__(self, message: str, pe_hat: float, bound: float):
        super().__init__(
            message=message,
            error_code="VERIFICATION_FAILED",
            details={"pe_hat": pe_hat, "bound": bound},
        )
