#!/usr/bin/env python3
"""
Error Handling Utilities

Exception hierarchy for the lab plus the helpers that turn failures into
report records.
"""

import functools
import inspect
import logging
from dataclasses import dataclass, field
from datetime import datetime
from typing import Any, Callable, Dict, List, Optional

logger = logging.getLogger(__name__)


class PadicLabError(Exception):
    """Base exception for all lab errors."""

    def __init__(
        self,
        message: str,
        error_code: Optional[str] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message)
        self.message = message
        self.error_code = error_code or self.__class__.__name__
        self.details = details or {}
        self.timestamp = datetime.now()


class NonconvergentSum(PadicLabError):
    """A series over scale indices does not converge."""
    pass


class ResourceLimit(PadicLabError):
    """A configured cap (coset count, tail terms) would be exceeded."""
    pass


class ParameterOutOfRange(PadicLabError):
    """A parameter violates the admissible range of an operation."""
    pass


class DimensionMismatch(PadicLabError):
    """Inputs disagree on the prime or the dimension."""
    pass


class HypothesisViolated(PadicLabError):
    """A scenario does not satisfy the hypotheses of its theorem."""
    pass


class SchemaError(PadicLabError):
    """Run configuration could not be validated."""

    def __init__(
        self,
        message: str,
        problems: Optional[List[str]] = None,
        details: Optional[Dict[str, Any]] = None,
    ):
        super().__init__(message, details=details)
        self.problems = problems or []


class ReportIOError(PadicLabError):
    """Reports could not be written."""
    pass


class ConfigurationError(PadicLabError):
    """Lab configuration errors."""
    pass


@dataclass
class ErrorResult:
    """Standardized error result structure."""
    success: bool = False
    error: str = ""
    message: str = ""
    details: Dict[str, Any] = field(default_factory=dict)
    timestamp: str = ""

    def to_dict(self) -> Dict[str, Any]:
        """Convert to dictionary."""
        return {
            "success": self.success,
            "error": self.error,
            "message": self.message,
            "details": self.details,
            "timestamp": self.timestamp,
        }


def error_result(exc: BaseException) -> ErrorResult:
    """Build an ErrorResult from any exception."""
    if isinstance(exc, PadicLabError):
        return ErrorResult(
            error=exc.error_code,
            message=exc.message,
            details=dict(exc.details),
            timestamp=exc.timestamp.isoformat(),
        )
    return ErrorResult(
        error="UnexpectedError",
        message=f"An unexpected error occurred: {exc}",
        timestamp=datetime.now().isoformat(),
    )


def validate_parameters(**validators: Callable[[Any], bool]):
    """
    Decorator for parameter validation.

    Example:
        @validate_parameters(p=is_prime, level=lambda j: j >= 1)
        def unit_sphere_cosets(p, n, level):
            ...
    """
    def decorator(func: Callable) -> Callable:
        sig = inspect.signature(func)

        @functools.wraps(func)
        def wrapper(*args, **kwargs):
            bound_args = sig.bind(*args, **kwargs)
            bound_args.apply_defaults()

            for param_name, validator in validators.items():
                if param_name not in bound_args.arguments:
                    continue
                value = bound_args.arguments[param_name]
                try:
                    valid = validator(value)
                except Exception as e:
                    raise ParameterOutOfRange(
                        f"Validation error for parameter '{param_name}': {e}",
                        error_code="ParameterValidationError",
                        details={"parameter": param_name, "value": repr(value)},
                    )
                if not valid:
                    logger.debug(f"{func.__name__} rejected {param_name}={value!r}")
                    raise ParameterOutOfRange(
                        f"Invalid value for parameter '{param_name}': {value!r}",
                        error_code="ParameterValidationError",
                        details={"parameter": param_name, "value": repr(value)},
                    )

            return func(*args, **kwargs)
        return wrapper
    return decorator


# Common validation functions
def is_prime(value: Any) -> bool:
    """Check if value is a prime integer."""
    if not isinstance(value, int) or isinstance(value, bool) or value < 2:
        return False
    divisor = 2
    while divisor * divisor <= value:
        if value % divisor == 0:
            return False
        divisor += 1
    return True


def is_positive_integer(value: Any) -> bool:
    """Check if value is a positive integer."""
    return isinstance(value, int) and not isinstance(value, bool) and value > 0
