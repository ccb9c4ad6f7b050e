"""Weak variation: a_{n+1}/a_n -> 1 on a trailing window."""

from __future__ import annotations

from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from typing import Union

import mpmath

from specpred.errors import InvalidSeriesError
from specpred.predict import PredictionErrorSeries

STRIDES = (2, 3)

SeriesLike = Union[PredictionErrorSeries, Sequence[Union[float, mpmath.mpf]]]


@dataclass(frozen=True)
class WeakVariationResult:
    """Verdict of the weak-variation diagnostic.

    Attributes:
        passed: Whether every check held on the trailing window.
        window: Number of trailing ratios examined.
        tol: Tolerance on |a_{n+1}/a_n - 1|.
        ratios: a_{n+1}/a_n over the window, for plotting.
        stride_passed: Verdict of the a_{n+nu}/a_n check per stride nu.
        max_deviation: Largest |a_{n+1}/a_n - 1| on the window.
    """

    passed: bool
    window: int
    tol: float
    ratios: tuple[float, ...]
    stride_passed: Mapping[int, bool] = field(default_factory=dict)
    max_deviation: float = 0.0


def as_values(series: SeriesLike) -> list[mpmath.mpf]:
    """Plain list of values from a series or a sequence of numbers."""
    if isinstance(series, PredictionErrorSeries):
        return list(series.sigma2)
    return [mpmath.mpf(v) for v in series]


def weak_variation(series: SeriesLike, window: int = 50, tol: float = 0.05) -> WeakVariationResult:
    """Check |a_{n+1}/a_n - 1| <= tol over the last ``window`` ratios.

    The stride variant a_{n+nu}/a_n is held to nu * tol for nu = 2, 3.

    Raises:
        InvalidSeriesError: The series is shorter than 2*window or has a zero entry.
    """
    values = as_values(series)
    if window < 1:
        raise InvalidSeriesError(f"Window must be positive, got {window}")
    if len(values) < 2 * window:
        raise InvalidSeriesError(
            f"Series of length {len(values)} is shorter than twice the window {window}"
        )
    zeros = [i + 1 for i, v in enumerate(values) if v == 0]
    if zeros:
        raise InvalidSeriesError(f"Series has a zero entry at n = {zeros[0]}")
    start = len(values) - window - 1
    ratios = [values[i + 1] / values[i] for i in range(start, len(values) - 1)]
    deviation = max(float(abs(q - 1)) for q in ratios)
    stride_passed = {
        nu: all(
            abs(values[i + nu] / values[i] - 1) <= nu * tol
            for i in range(len(values) - window - nu, len(values) - nu)
        )
        for nu in STRIDES
    }
    return WeakVariationResult(
        passed=deviation <= tol and all(stride_passed.values()),
        window=window,
        tol=tol,
        ratios=tuple(float(q) for q in ratios),
        stride_passed=stride_passed,
        max_deviation=deviation,
    )
