"""Asymptotic diagnostics: weak variation, power laws, ratio limits and the constants table."""

from specpred.asymptotics.constants import normalized_rosenblatt_trace, rosenblatt_constant
from specpred.asymptotics.fitting import FIT_ACCEPTANCE, AsymptoticFit, default_window, fit_power_law
from specpred.asymptotics.ratio import (
    CompositionResult,
    RatioDiagnostics,
    SeparationTrace,
    common_zero_comparison,
    composition_check,
    geometric_grid,
    membership_basis,
    ratio_limit,
    ratio_trace,
    separation_check,
)
from specpred.asymptotics.table import TABLE_A_VALUES, TABLE_COLUMNS, Table1Row, table1, table1_row
from specpred.asymptotics.weak_variation import WeakVariationResult, as_values, weak_variation

__all__ = [
    "FIT_ACCEPTANCE",
    "TABLE_A_VALUES",
    "TABLE_COLUMNS",
    "AsymptoticFit",
    "CompositionResult",
    "RatioDiagnostics",
    "SeparationTrace",
    "Table1Row",
    "WeakVariationResult",
    "as_values",
    "common_zero_comparison",
    "composition_check",
    "default_window",
    "fit_power_law",
    "geometric_grid",
    "membership_basis",
    "normalized_rosenblatt_trace",
    "ratio_limit",
    "ratio_trace",
    "separation_check",
    "table1",
    "table1_row",
    "weak_variation",
]
