"""Least-squares power laws sigma_n^2 ~ C n^{-a}."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np

from specpred.asymptotics.weak_variation import SeriesLike, as_values
from specpred.errors import InvalidSeriesError

logger = logging.getLogger(__name__)

FIT_ACCEPTANCE = 0.05


@dataclass(frozen=True)
class AsymptoticFit:
    """Result of fitting C n^{-a} to a series.

    Attributes:
        exponent: Fitted a.
        constant: Fitted C.
        window: Inclusive index range (first n, last n) used.
        residual: max |C n^{-a} / a_n - 1| on the window.
        accepted: Whether the residual is within the acceptance threshold.
        degenerate: The window is constant, so a = 0 by convention.
    """

    exponent: float
    constant: float
    window: tuple[int, int]
    residual: float
    accepted: bool
    degenerate: bool = False


def default_window(length: int) -> tuple[int, int]:
    """The window [N/4, N]."""
    return max(1, length // 4), length


def fit_power_law(
    series: SeriesLike,
    window: Optional[tuple[int, int]] = None,
    threshold: float = FIT_ACCEPTANCE,
) -> AsymptoticFit:
    """Fit log a_n = log C - a log n on ``window`` (orders counted from 1).

    Raises:
        InvalidSeriesError: The window is empty, out of range, or holds nonpositive values.
    """
    values = as_values(series)
    first, last = window or default_window(len(values))
    if not 1 <= first <= last <= len(values):
        raise InvalidSeriesError(f"Window [{first}, {last}] is outside 1..{len(values)}")
    chunk = values[first - 1 : last]
    if any(v <= 0 for v in chunk):
        raise InvalidSeriesError("A power law needs a positive series")
    n = np.arange(first, last + 1, dtype=float)
    # log in mpmath first: values may be far below the double range
    log_a = np.array([float(mpmath.log(v)) for v in chunk])
    if np.ptp(log_a) == 0:
        return AsymptoticFit(
            exponent=0.0,
            constant=float(np.exp(log_a[0])),
            window=(first, last),
            residual=0.0,
            accepted=True,
            degenerate=True,
        )
    slope, intercept = np.polyfit(np.log(n), log_a, 1)
    predicted = intercept + slope * np.log(n)
    residual = float(np.max(np.abs(np.expm1(predicted - log_a))))
    fit = AsymptoticFit(
        exponent=float(-slope),
        constant=float(np.exp(intercept)),
        window=(first, last),
        residual=residual,
        accepted=residual <= threshold,
    )
    if not fit.accepted:
        logger.info("power-law fit rejected: residual %.3e above %.3e", residual, threshold)
    return fit
