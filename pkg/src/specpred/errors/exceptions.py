"""Structured error types for specpred.

Two families live here. ``ExpressionError`` reports problems in a density
expression with a source position, rendered Rust-style. ``SpecpredError`` and
its subclasses report numerical and construction failures.
"""

from dataclasses import dataclass
from typing import Any, Optional


@dataclass(frozen=True)
class ExpressionError(Exception):
    """A density-expression error with source location and helpful messages.

    Formats errors in Rust-style with line numbers, source context, and suggestions.

    Attributes:
        line: 1-indexed line number where the error occurred.
        column: 1-indexed column number where the error occurred.
        message: Human-readable error description.
        suggestion: Optional help text for fixing the error.
        source_line: Optional source line for context.
        file_path: Optional path to the source (config file or "<expr>").
        error_code: Optional error code (e.g., E001).
    """

    line: int
    column: int
    message: str
    suggestion: Optional[str] = None
    source_line: Optional[str] = None
    file_path: Optional[str] = None
    error_code: Optional[str] = None

    def __str__(self) -> str:
        """Format the error in Rust-style output."""
        lines = []

        if self.error_code:
            lines.append(f"Error[{self.error_code}]: {self.message}")
        else:
            lines.append(f"Error: {self.message}")

        file_display = self.file_path or "<expr>"
        lines.append(f"  --> {file_display}:{self.line}:{self.column}")

        if self.source_line is not None:
            line_num_width = len(str(self.line))
            padding = " " * line_num_width

            lines.append(f"   {padding}|")
            lines.append(f"   {self.line} | {self.source_line}")

            pointer_padding = " " * (self.column - 1)
            lines.append(f"   {padding}| {pointer_padding}^")

        if self.suggestion:
            lines.append("   |")
            lines.append(f"Help: {self.suggestion}")

        return "\n".join(lines)

    def __repr__(self) -> str:
        """Return a developer-friendly representation."""
        return (
            f"ExpressionError(line={self.line}, column={self.column}, "
            f"message={self.message!r})"
        )


class SpecpredError(Exception):
    """Base class for numerical and construction failures."""

    def __init__(self, message: str) -> None:
        """Initialize with error message."""
        self.message = message
        super().__init__(message)


class InvalidParameterError(SpecpredError, ValueError):
    """A constructor parameter is outside its admissible range."""


class InvalidConstructionError(SpecpredError, ValueError):
    """A density cannot be built from the given operands."""


class IntegrabilityError(SpecpredError):
    """A density has a non-integrable pole."""


class PrecisionError(SpecpredError):
    """Requested accuracy was not reached within the subdivision budget.

    Attributes:
        best_effort_bound: The error bound that was actually achieved.
    """

    def __init__(self, message: str, best_effort_bound: float) -> None:
        """Initialize with message and achieved bound."""
        self.best_effort_bound = best_effort_bound
        super().__init__(message)


class ConsistencyError(SpecpredError):
    """Two independent computations disagree beyond their error bounds."""


class UndecidableDivergenceError(SpecpredError):
    """Divergence of the log-integral cannot be decided from the annotations."""


class PSDViolationError(SpecpredError):
    """A Toeplitz matrix is not positive definite.

    Attributes:
        minor: Order of the first leading principal minor that failed.
    """

    def __init__(self, message: str, minor: int) -> None:
        """Initialize with message and failing minor."""
        self.minor = minor
        super().__init__(message)


class IllConditionedError(SpecpredError):
    """The recursion broke down even at the maximum precision.

    Attributes:
        last_valid_n: Largest n for which sigma_n^2 is trustworthy.
        partial: The partial result computed up to last_valid_n, if any.
    """

    def __init__(self, message: str, last_valid_n: int, partial: Optional[Any] = None) -> None:
        """Initialize with message, last valid order and partial result."""
        self.last_valid_n = last_valid_n
        self.partial = partial
        super().__init__(message)


class InvalidSeriesError(SpecpredError, ValueError):
    """A sequence handed to a diagnostic violates its preconditions."""


class NotApplicableError(SpecpredError):
    """A limit theorem does not apply to the given factor."""


class PreconditionError(SpecpredError, ValueError):
    """A comparison precondition (shared zeros, removable limits) fails."""
