"""Singularity-aware integration: covariances and geometric means."""

from specpred.integrate.covariance import (
    DEFAULT_PRECISION,
    CovarianceSequence,
    covariance_sequence,
    fourier_coefficient,
    integrate_density,
)
from specpred.integrate.geometric import (
    GeometricMeanResult,
    Verdict,
    geometric_mean,
    szego_condition,
)
from specpred.integrate.quadrature import Estimate

__all__ = [
    "DEFAULT_PRECISION",
    "CovarianceSequence",
    "Estimate",
    "GeometricMeanResult",
    "Verdict",
    "covariance_sequence",
    "fourier_coefficient",
    "geometric_mean",
    "integrate_density",
    "szego_condition",
]
