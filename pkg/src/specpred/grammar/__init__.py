"""Density-expression grammar module."""

from specpred.grammar.parser import Parser

__all__ = ["Parser"]
