"""
Input Validation
Field-level validation for run configurations and command-line parameters.
"""

import math
import logging
from typing import Any, List, Optional, Sequence, Tuple
from dataclasses import dataclass

from .config import get_config
from .utils.error_handling import is_prime

logger = logging.getLogger(__name__)


@dataclass
class ValidationResult:
    """Result of validation check"""
    is_valid: bool
    message: str
    sanitized_value: Optional[Any] = None
    errors: Optional[List[str]] = None

    def __bool__(self) -> bool:
        """Allow using result as boolean"""
        return self.is_valid


class InputValidator:
    """Validates and sanitizes lab parameters"""

    MAX_DIMENSION = 6
    MAX_FACTORS = 6

    @classmethod
    def validate_integer(cls, value: Any, field: str = "value") -> ValidationResult:
        """
        Validate an integer (strings are converted, bools rejected).

        Args:
            value: Input to validate
            field: Field name used in messages

        Returns:
            Validation result
        """
        if isinstance(value, bool):
            return ValidationResult(False, f"{field} must be an integer, got bool")
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        try:
            if isinstance(value, str):
                value = int(value)
            elif not isinstance(value, int):
                return ValidationResult(
                    is_valid=False,
                    message=f"{field} must be an integer, got {type(value).__name__}"
                )
        except (ValueError, TypeError) as e:
            return ValidationResult(False, f"{field}: invalid integer ({e})")
        return ValidationResult(True, f"Valid {field}", sanitized_value=value)

    @classmethod
    def validate_prime(cls, value: Any, field: str = "p") -> ValidationResult:
        """Validate the prime p."""
        result = cls.validate_integer(value, field)
        if not result:
            return result
        if not is_prime(result.sanitized_value):
            return ValidationResult(False, f"{field} must be prime, got {result.sanitized_value}")
        return result

    @classmethod
    def validate_dimension(cls, value: Any, field: str = "n") -> ValidationResult:
        """Validate the dimension n of Q_p^n."""
        result = cls.validate_integer(value, field)
        if not result:
            return result
        if not 1 <= result.sanitized_value <= cls.MAX_DIMENSION:
            return ValidationResult(
                False, f"{field} must be between 1 and {cls.MAX_DIMENSION}"
            )
        return result

    @classmethod
    def validate_numeric_range(
        cls,
        value: Any,
        field: str = "value",
        min_value: Optional[float] = None,
        max_value: Optional[float] = None,
        min_inclusive: bool = True,
        max_inclusive: bool = True,
        allow_infinite: bool = False,
    ) -> ValidationResult:
        """
        Validate numeric value within range.

        Args:
            value: Value to validate
            field: Field name used in messages
            min_value: Minimum allowed value
            max_value: Maximum allowed value
            min_inclusive: Whether the minimum itself is allowed
            max_inclusive: Whether the maximum itself is allowed
            allow_infinite: Whether +-inf is accepted

        Returns:
            Validation result
        """
        if isinstance(value, bool):
            return ValidationResult(False, f"{field} must be numeric, got bool")
        try:
            if isinstance(value, str):
                value = float(value)
            elif not isinstance(value, (int, float)):
                return ValidationResult(
                    is_valid=False,
                    message=f"{field} must be numeric, got {type(value).__name__}"
                )
        except (ValueError, TypeError) as e:
            return ValidationResult(False, f"{field}: invalid numeric value ({e})")

        value = float(value)
        if math.isnan(value) or (math.isinf(value) and not allow_infinite):
            return ValidationResult(False, f"{field} must be finite, got {value}")

        if min_value is not None:
            below = value < min_value if min_inclusive else value <= min_value
            if below:
                bound = ">=" if min_inclusive else ">"
                return ValidationResult(False, f"{field} must be {bound} {min_value}, got {value}")

        if max_value is not None:
            above = value > max_value if max_inclusive else value >= max_value
            if above:
                bound = "<=" if max_inclusive else "<"
                return ValidationResult(False, f"{field} must be {bound} {max_value}, got {value}")

        return ValidationResult(True, f"Valid {field}", sanitized_value=value)

    @classmethod
    def validate_exponent(cls, value: Any, field: str = "q") -> ValidationResult:
        """Validate a Lebesgue-type exponent (>= 1, may be inf)."""
        return cls.validate_numeric_range(value, field, min_value=1.0, allow_infinite=True)

    @classmethod
    def validate_window(cls, value: Any, field: str = "window") -> ValidationResult:
        """
        Validate an index window [lo, hi] with |lo|, |hi| within the configured max_abs_index.

        Returns:
            Validation result whose sanitized value is a (lo, hi) tuple
        """
        if not isinstance(value, (list, tuple)) or len(value) != 2:
            return ValidationResult(False, f"{field} must be a pair [lo, hi]")
        bounds: List[int] = []
        for index, bound in enumerate(value):
            result = cls.validate_integer(bound, f"{field}[{index}]")
            if not result:
                return result
            bounds.append(result.sanitized_value)
        lo, hi = bounds
        if lo > hi:
            return ValidationResult(False, f"{field} is empty: {lo} > {hi}")
        limit = get_config().windows.max_abs_index
        if max(abs(lo), abs(hi)) > limit:
            return ValidationResult(False, f"{field} must lie within [-{limit}, {limit}]")
        return ValidationResult(True, f"Valid {field}", sanitized_value=(lo, hi))

    @classmethod
    def validate_list_input(
        cls,
        values: Any,
        field: str = "values",
        length: Optional[int] = None,
        max_length: Optional[int] = None,
    ) -> ValidationResult:
        """
        Validate a list of numbers.

        Args:
            values: Input list
            field: Field name used in messages
            length: Required exact length
            max_length: Maximum allowed length

        Returns:
            Validation result with a list of floats
        """
        if not isinstance(values, (list, tuple)):
            return ValidationResult(False, f"{field} must be a list, got {type(values).__name__}")
        if length is not None and len(values) != length:
            return ValidationResult(False, f"{field} must have {length} entries, got {len(values)}")
        if max_length is not None and len(values) > max_length:
            return ValidationResult(False, f"{field} has more than {max_length} entries")

        errors = []
        sanitized = []
        for index, item in enumerate(values):
            result = cls.validate_numeric_range(item, f"{field}[{index}]")
            if result:
                sanitized.append(result.sanitized_value)
            else:
                errors.append(result.message)
        if errors:
            return ValidationResult(False, f"Invalid entries in {field}", errors=errors)
        return ValidationResult(True, f"Valid {field}", sanitized_value=sanitized)


def collect_errors(results: Sequence[ValidationResult]) -> List[str]:
    """Flatten failing results into a list of messages."""
    problems: List[str] = []
    for result in results:
        if result:
            continue
        problems.extend(result.errors or [result.message])
    return problems


def first_failure(results: Sequence[ValidationResult]) -> Tuple[bool, Optional[str]]:
    """Return (ok, message of the first failing result)."""
    for result in results:
        if not result:
            return False, result.message
    return True, None
