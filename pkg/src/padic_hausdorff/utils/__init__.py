#!/usr/bin/env python3
"""
Lab Utilities

Error hierarchy and shared validation helpers.
"""

from .error_handling import (
    PadicLabError,
    NonconvergentSum,
    ResourceLimit,
    ParameterOutOfRange,
    DimensionMismatch,
    HypothesisViolated,
    SchemaError,
    ReportIOError,
    ConfigurationError,
    ErrorResult,
    error_result,
    validate_parameters,
    is_prime,
    is_positive_integer,
)

__all__ = [
    # Exceptions
    'PadicLabError',
    'NonconvergentSum',
    'ResourceLimit',
    'ParameterOutOfRange',
    'DimensionMismatch',
    'HypothesisViolated',
    'SchemaError',
    'ReportIOError',
    'ConfigurationError',

    # Error results
    'ErrorResult',
    'error_result',

    # Validation
    'validate_parameters',
    'is_prime',
    'is_positive_integer',
]
