"""Semantic analysis: name resolution, argument binding and kind checking."""

from __future__ import annotations

import difflib
from typing import Optional

from specpred.ast.nodes import (
    ASTNode,
    BinaryOp,
    Call,
    Expression,
    Identifier,
    ListLiteral,
    Number,
    UnaryOp,
)
from specpred.ast.visitors import ASTVisitor
from specpred.errors import ExpressionError
from specpred.semantic.symbols import BindingError, SymbolTable, ValueKind

SCALAR, LIST, DENSITY = ValueKind.SCALAR, ValueKind.LIST, ValueKind.DENSITY


class SemanticAnalyzer(ASTVisitor):
    """Checks an expression and infers the kind of every subexpression.

    Error codes:
        E101: unknown name.
        E102: unknown constructor.
        E103: arguments do not fit the constructor signature.
        E104: operand or argument of the wrong kind.
        E105: the whole expression is not a density.
    """

    def __init__(
        self,
        source: Optional[str] = None,
        file_path: Optional[str] = None,
        symbol_table: Optional[SymbolTable] = None,
    ) -> None:
        """Initialize with the source text used for error context."""
        self._lines = source.splitlines() if source is not None else []
        self._file_path = file_path
        self._symbol_table = symbol_table or SymbolTable()

    @property
    def symbol_table(self) -> SymbolTable:
        """Get the symbol table used for resolution."""
        return self._symbol_table

    def analyze(self, expression: Expression) -> ValueKind:
        """Check a top-level density expression.

        Raises:
            ExpressionError: The first problem found.
        """
        kind = self.visit(expression)
        if kind is not DENSITY:
            raise self._error(
                expression,
                f"Expression is a {kind.value}, not a density",
                "E105",
                "Wrap a positive number in const(...) to get a constant density",
            )
        return kind

    def _error(
        self, node: ASTNode, message: str, code: str, suggestion: Optional[str] = None
    ) -> ExpressionError:
        loc = node.source_location
        source_line = self._lines[loc.line - 1] if 0 < loc.line <= len(self._lines) else None
        return ExpressionError(
            line=loc.line,
            column=loc.column,
            message=message,
            suggestion=suggestion,
            source_line=source_line,
            file_path=self._file_path,
            error_code=code,
        )

    def _did_you_mean(self, name: str, candidates: list[str]) -> Optional[str]:
        close = difflib.get_close_matches(name, candidates, n=1)
        return f"Did you mean '{close[0]}'?" if close else None

    def visit_Number(self, node: Number) -> ValueKind:
        """Numbers are scalars."""
        return SCALAR

    def visit_Identifier(self, node: Identifier) -> ValueKind:
        """Bare names must be named constants."""
        if self._symbol_table.is_constant(node.name):
            return SCALAR
        if self._symbol_table.lookup(node.name) is not None:
            raise self._error(
                node,
                f"Constructor '{node.name}' needs an argument list",
                "E101",
                f"Write {self._symbol_table.lookup(node.name)}",
            )
        raise self._error(
            node,
            f"Unknown name '{node.name}'",
            "E101",
            self._did_you_mean(node.name, self._symbol_table.names()),
        )

    def visit_ListLiteral(self, node: ListLiteral) -> ValueKind:
        """Lists hold scalars only."""
        for item in node.items:
            if self.visit(item) is not SCALAR:
                raise self._error(item, "List elements must be numbers", "E104")
        return LIST

    def visit_UnaryOp(self, node: UnaryOp) -> ValueKind:
        """Only scalars can be negated."""
        if self.visit(node.operand) is not SCALAR:
            raise self._error(node, "A density cannot be negated", "E104")
        return SCALAR

    def visit_BinaryOp(self, node: BinaryOp) -> ValueKind:
        """Infer the kind of an infix operation."""
        left, right = self.visit(node.left), self.visit(node.right)
        if LIST in (left, right):
            raise self._error(node, f"'{node.operator}' does not apply to lists", "E104")
        if left is SCALAR and right is SCALAR:
            return SCALAR
        if node.operator == "*":
            return DENSITY
        if node.operator == "/" and left is DENSITY:
            return DENSITY
        if node.operator == "^" and left is DENSITY and right is SCALAR:
            return DENSITY
        if node.operator == "/":
            message = "A number cannot be divided by a density"
        elif node.operator == "^":
            message = "Exponents must be numbers"
        else:
            message = f"Densities cannot be combined with '{node.operator}'"
        raise self._error(node, message, "E104")

    def visit_Call(self, node: Call) -> ValueKind:
        """Resolve the constructor, bind arguments and check their kinds."""
        name = node.function.name
        signature = self._symbol_table.lookup(name)
        if signature is None:
            raise self._error(
                node.function,
                f"Unknown constructor '{name}'",
                "E102",
                self._did_you_mean(name, sorted(self._symbol_table.signatures)),
            )
        try:
            bound = signature.bind(node)
        except BindingError as exc:
            raise self._error(
                exc.argument or node, exc.message, "E103", f"Signature: {signature}"
            ) from exc
        for parameter_name, value in bound.items():
            parameter = signature.parameter(parameter_name)
            assert parameter is not None
            kind = self.visit(value)
            if kind is not parameter.kind:
                raise self._error(
                    value,
                    f"Argument '{parameter_name}' of {name}() must be a {parameter.kind.value}, "
                    f"got a {kind.value}",
                    "E104",
                )
        return DENSITY

    def generic_visit(self, node: ASTNode) -> ValueKind:
        """Unknown node types are a programming error."""
        raise TypeError(f"Unexpected node {type(node).__name__}")
