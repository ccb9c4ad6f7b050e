"""Specpred error types module."""

from specpred.errors.exceptions import (
    ConsistencyError,
    ExpressionError,
    IllConditionedError,
    IntegrabilityError,
    InvalidConstructionError,
    InvalidParameterError,
    InvalidSeriesError,
    NotApplicableError,
    PrecisionError,
    PreconditionError,
    PSDViolationError,
    SpecpredError,
    UndecidableDivergenceError,
)

__all__ = [
    "ConsistencyError",
    "ExpressionError",
    "IllConditionedError",
    "IntegrabilityError",
    "InvalidConstructionError",
    "InvalidParameterError",
    "InvalidSeriesError",
    "NotApplicableError",
    "PSDViolationError",
    "PrecisionError",
    "PreconditionError",
    "SpecpredError",
    "UndecidableDivergenceError",
]
