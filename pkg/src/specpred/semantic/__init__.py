"""Semantic analysis of density expressions."""

from specpred.semantic.analyzer import SemanticAnalyzer
from specpred.semantic.symbols import (
    CONSTANTS,
    REQUIRED,
    SIGNATURES,
    BindingError,
    Parameter,
    Signature,
    SymbolTable,
    ValueKind,
)

__all__ = [
    "CONSTANTS",
    "REQUIRED",
    "SIGNATURES",
    "BindingError",
    "Parameter",
    "SemanticAnalyzer",
    "Signature",
    "SymbolTable",
    "ValueKind",
]
