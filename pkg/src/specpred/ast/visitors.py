"""Visitor pattern for AST traversal."""

from typing import Any

from specpred.ast.nodes import (
    Argument,
    ASTNode,
    BinaryOp,
    Call,
    Identifier,
    ListLiteral,
    Number,
    UnaryOp,
)


class ASTVisitor:
    """Base visitor class for traversing the AST.

    Subclass this and override visit_* methods for specific node types.
    Default behavior is to visit all children.
    """

    def visit(self, node: ASTNode) -> Any:
        """Dispatch to the appropriate visit method based on node type."""
        method_name = f"visit_{type(node).__name__}"
        visitor = getattr(self, method_name, self.generic_visit)
        return visitor(node)

    def generic_visit(self, node: ASTNode) -> None:
        """Default visitor that does nothing.

        Override this to change default behavior for unhandled node types.
        """

    def visit_Call(self, node: Call) -> Any:
        """Visit a Call node."""
        self.visit(node.function)
        for argument in node.arguments:
            self.visit(argument)

    def visit_Argument(self, node: Argument) -> Any:
        """Visit an Argument node."""
        self.visit(node.value)

    def visit_BinaryOp(self, node: BinaryOp) -> Any:
        """Visit a BinaryOp node."""
        self.visit(node.left)
        self.visit(node.right)

    def visit_UnaryOp(self, node: UnaryOp) -> Any:
        """Visit a UnaryOp node."""
        self.visit(node.operand)

    def visit_ListLiteral(self, node: ListLiteral) -> Any:
        """Visit a ListLiteral node."""
        for item in node.items:
            self.visit(item)

    def visit_Number(self, node: Number) -> Any:
        """Visit a Number node."""
        self.generic_visit(node)

    def visit_Identifier(self, node: Identifier) -> Any:
        """Visit an Identifier node."""
        self.generic_visit(node)


class ASTPrinter(ASTVisitor):
    """Visitor that prints the AST in a readable format."""

    def __init__(self) -> None:
        """Initialize the printer with zero indentation."""
        self._indent = 0
        self._output: list[str] = []

    def _emit(self, text: str) -> None:
        """Emit a line with current indentation."""
        self._output.append("  " * self._indent + text)

    def get_output(self) -> str:
        """Get the accumulated output as a string."""
        return "\n".join(self._output)

    def visit_Call(self, node: Call) -> None:
        """Print a Call node."""
        self._emit(f"Call: {node.function.name}")
        self._indent += 1
        for argument in node.arguments:
            self.visit(argument)
        self._indent -= 1

    def visit_Argument(self, node: Argument) -> None:
        """Print an Argument node."""
        self._emit(f"Argument: {node.name.name}" if node.name else "Argument")
        self._indent += 1
        self.visit(node.value)
        self._indent -= 1

    def visit_BinaryOp(self, node: BinaryOp) -> None:
        """Print a BinaryOp node."""
        self._emit(f"BinaryOp: {node.operator}")
        self._indent += 1
        self.visit(node.left)
        self.visit(node.right)
        self._indent -= 1

    def visit_UnaryOp(self, node: UnaryOp) -> None:
        """Print a UnaryOp node."""
        self._emit(f"UnaryOp: {node.operator}")
        self._indent += 1
        self.visit(node.operand)
        self._indent -= 1

    def visit_ListLiteral(self, node: ListLiteral) -> None:
        """Print a ListLiteral node."""
        self._emit(f"List: {len(node.items)} items")
        self._indent += 1
        for item in node.items:
            self.visit(item)
        self._indent -= 1

    def visit_Number(self, node: Number) -> None:
        """Print a Number node."""
        self._emit(f"Number: {node.value:g}")

    def visit_Identifier(self, node: Identifier) -> None:
        """Print an Identifier node."""
        self._emit(f"Name: {node.name}")
