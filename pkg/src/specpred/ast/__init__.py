"""Density-expression AST module."""

from specpred.ast.nodes import (
    Argument,
    ASTNode,
    BinaryOp,
    Call,
    Expression,
    Identifier,
    ListLiteral,
    Number,
    SourceLocation,
    UnaryOp,
)

__all__ = [
    "ASTNode",
    "Argument",
    "BinaryOp",
    "Call",
    "Expression",
    "Identifier",
    "ListLiteral",
    "Number",
    "SourceLocation",
    "UnaryOp",
]
