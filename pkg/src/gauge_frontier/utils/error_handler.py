"""Error handling utilities for gauge-frontier commands.

Converts exceptions into structured error responses and the CLI exit-code
contract (0 success, 1 numerical or verification failure, 2 usage or
validation error).
"""

import sys
import time
from collections.abc import Callable
from functools import wraps
from typing import Any, TypeVar

import numpy as np

from .exceptions import (
    ConfigurationError,
    GaugeFrontierError,
    NumericalError,
    ValidationError,
)
from .formatters import dump_json, format_error_response
from .logging import LogContext, PerformanceMetrics, get_logger


logger = get_logger(__name__)

F = TypeVar("F", bound=Callable[..., int])


class ErrorHandler:
    """Centralized error handling for CLI commands."""

    def __init__(self) -> None:
        self._error_counts: dict[str, int] = {}
        self._recent_errors: list[dict[str, Any]] = []
        self._max_recent_errors = 100

    def handle_error(
        self,
        error: Exception,
        command: str | None = None,
        operation: str | None = None,
        context: LogContext | None = None,
        parameters: dict[str, Any] | None = None,
    ) -> tuple[dict[str, Any], int]:
        """Log ``error`` and turn it into an error response and exit code.

        Args:
            error: Exception that occurred
            command: CLI command that failed
            operation: Operation that failed
            context: Log context
            parameters: Resolved command parameters

        Returns:
            ``(response, exit_code)``
        """
        error_type = type(error).__name__
        self._error_counts[error_type] = self._error_counts.get(error_type, 0) + 1
        self._recent_errors.append(
            {
                "error_type": error_type,
                "error_message": str(error),
                "command": command,
                "operation": operation,
            }
        )
        if len(self._recent_errors) > self._max_recent_errors:
            self._recent_errors.pop(0)

        logger.log_error(
            error=error,
            operation=f"{command}.{operation}" if command and operation else operation,
            context=context,
            additional_data={"parameters": parameters} if parameters else None,
        )

        converted = error if isinstance(error, GaugeFrontierError) else self._convert(error)
        response = format_error_response(
            error_code=converted.error_code,
            message=converted.message,
            details=converted.details,
        )
        return response, converted.exit_code

    def _convert(self, error: Exception) -> GaugeFrontierError:
        """Map foreign exceptions onto the coded hierarchy."""
        message = str(error)
        if isinstance(error, np.linalg.LinAlgError):
            return NumericalError(f"Linear algebra failure: {message}", "linalg")
        if isinstance(error, ArithmeticError):
            return NumericalError(f"Arithmetic failure: {message}", "arithmetic")
        if isinstance(error, ValueError):
            return ValidationError(
                message=f"Invalid input: {message}",
                field_name="unknown",
                validation_rule="value_error",
            )
        if isinstance(error, OSError):
            return ConfigurationError(f"I/O failure: {message}")
        return GaugeFrontierError(
            f"Command failed: {message}", "INTERNAL_ERROR", {"error_type": type(error).__name__}
        )

    def get_error_statistics(self) -> dict[str, Any]:
        total_errors = sum(self._error_counts.values())
        return {
            "total_errors": total_errors,
            "error_counts_by_type": self._error_counts.copy(),
            "recent_errors_count": len(self._recent_errors),
            "most_common_error": max(self._error_counts.items(), key=lambda x: x[1])[0]
            if self._error_counts
            else None,
        }

    def get_recent_errors(self, limit: int = 10) -> list[dict[str, Any]]:
        return self._recent_errors[-limit:] if self._recent_errors else []

    def clear_error_history(self) -> None:
        self._error_counts.clear()
        self._recent_errors.clear()
        logger.debug("Error history cleared")


# Global error handler instance
error_handler = ErrorHandler()


def handle_command_errors(
    command: str | None = None,
    operation: str | None = None,
) -> Callable[[F], F]:
    """Run a command handler inside a log context and map failures to exit codes.

    The wrapped handler returns an exit code. Exceptions are logged, the
    error response is written to stderr as JSON, and the mapped exit code is
    returned instead.
    """

    def decorator(func: F) -> F:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> int:
            context = LogContext(
                command=command or func.__module__,
                operation=operation or func.__name__,
            )
            started = time.perf_counter()
            try:
                with logger.log_context(context):
                    return func(*args, **kwargs)
            except Exception as e:
                parameters = vars(args[0]) if args and hasattr(args[0], "__dict__") else kwargs
                response, exit_code = error_handler.handle_error(
                    error=e,
                    command=context.command,
                    operation=context.operation,
                    context=context,
                    parameters={k: v for k, v in parameters.items() if not callable(v)},
                )
                sys.stderr.write(dump_json(response))
                return exit_code
            finally:
                elapsed_ms = (time.perf_counter() - started) * 1000.0
                logger.log_performance(
                    context.operation or func.__name__,
                    PerformanceMetrics(execution_time_ms=elapsed_ms),
                    context,
                )

        return wrapper  # type: ignore[return-value]

    return decorator
