"""Finite prediction: Levinson recursion, determinant oracle, optimal polynomials."""

from specpred.predict.levinson import (
    BREAKDOWN_MARGIN,
    PredictionErrorSeries,
    durbin_recursion,
    levinson,
)
from specpred.predict.oracle import ORACLE_MAX_ORDER, determinant_oracle, log_determinant
from specpred.predict.pipeline import (
    PRECISION_LADDER,
    PredictionConfig,
    normalized,
    prediction_errors,
)
from specpred.predict.polynomial import PredictorPolynomial, predictor_polynomial

__all__ = [
    "BREAKDOWN_MARGIN",
    "ORACLE_MAX_ORDER",
    "PRECISION_LADDER",
    "PredictionConfig",
    "PredictionErrorSeries",
    "PredictorPolynomial",
    "determinant_oracle",
    "durbin_recursion",
    "levinson",
    "log_determinant",
    "normalized",
    "prediction_errors",
    "predictor_polynomial",
]
