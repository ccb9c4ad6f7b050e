"""Immutable AST node definitions for density expressions.

All nodes are frozen dataclasses with source location tracking.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union


@dataclass(frozen=True)
class SourceLocation:
    """Source code location for error reporting.

    Attributes:
        line: 1-indexed line number.
        column: 1-indexed column number.
        end_line: Optional ending line number.
        end_column: Optional ending column number.
    """

    line: int
    column: int
    end_line: Optional[int] = None
    end_column: Optional[int] = None

    def __str__(self) -> str:
        """Format as line:column."""
        return f"{self.line}:{self.column}"


@dataclass(frozen=True)
class ASTNode:
    """Base class for all AST nodes.

    All nodes must have a source location for error reporting.
    """

    source_location: SourceLocation


@dataclass(frozen=True)
class Identifier(ASTNode):
    """A bare name: a named constant such as ``pi``, or a constructor name.

    Attributes:
        name: The identifier string.
    """

    name: str


@dataclass(frozen=True)
class Number(ASTNode):
    """A numeric literal.

    Attributes:
        value: The literal value.
    """

    value: float


@dataclass(frozen=True)
class ListLiteral(ASTNode):
    """A bracketed list of scalar expressions, e.g. polynomial coefficients.

    Attributes:
        items: The list elements.
    """

    items: tuple[Expression, ...]


@dataclass(frozen=True)
class UnaryOp(ASTNode):
    """Negation.

    Attributes:
        operator: Always "-".
        operand: The negated expression.
    """

    operator: str
    operand: Expression


@dataclass(frozen=True)
class BinaryOp(ASTNode):
    """An infix operation.

    Attributes:
        operator: One of "+", "-", "*", "/", "^".
        left: Left operand.
        right: Right operand.
    """

    operator: str
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Argument(ASTNode):
    """A call argument, positional or keyword.

    Attributes:
        value: The argument expression.
        name: Keyword name, or None for a positional argument.
    """

    value: Expression
    name: Optional[Identifier] = None


@dataclass(frozen=True)
class Call(ASTNode):
    """A constructor call such as ``pollaczek(a=1)``.

    Attributes:
        function: The constructor name.
        arguments: Arguments in source order.
    """

    function: Identifier
    arguments: tuple[Argument, ...] = ()


Expression = Union[Identifier, Number, ListLiteral, UnaryOp, BinaryOp, Call]
