"""Ratio limits sigma_n^2(fg)/sigma_n^2(f) -> G(g) and related comparisons."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Optional

import mpmath
import numpy as np

from specpred.errors import NotApplicableError, PreconditionError
from specpred.integrate import geometric_mean
from specpred.predict import PredictionConfig, PredictionErrorSeries, prediction_errors
from specpred.spectra import SpectralDensity, SingularityKind, product, quotient

logger = logging.getLogger(__name__)

POINTS_PER_OCTAVE = 4


def geometric_grid(n_max: int, per_octave: int = POINTS_PER_OCTAVE) -> tuple[int, ...]:
    """Orders 1 <= n <= n_max spaced evenly in log n, always ending at n_max."""
    if n_max < 1:
        raise ValueError(f"n_max must be positive, got {n_max}")
    points = {n_max}
    j = 0
    while (n := round(2 ** (j / per_octave))) <= n_max:
        points.add(n)
        j += 1
    return tuple(sorted(points))


def _trailing(grid: tuple[int, ...], values: list[float]) -> tuple[float, float]:
    """Mean and slope in log n of the values on the last octave [N/2, N]."""
    cutoff = grid[-1] / 2
    window = [(n, v) for n, v in zip(grid, values) if n >= cutoff]
    ys = np.array([v for _, v in window])
    if len(window) < 2:
        return float(ys.mean()), 0.0
    xs = np.log(np.array([n for n, _ in window], dtype=float))
    slope = np.polyfit(xs, ys, 1)[0]
    return float(ys.mean()), float(slope)


@dataclass(frozen=True)
class RatioDiagnostics:
    """A ratio trace and its expected limit.

    Attributes:
        grid: Orders n at which the ratio was sampled.
        ratios: The ratio at each grid order.
        target: The expected limit G(g).
        trailing_mean: Mean of the ratio over [N/2, N].
        trailing_slope: Slope of the ratio against log n over [N/2, N].
        membership_basis: Which sufficient condition admitted the base density.
    """

    grid: tuple[int, ...]
    ratios: tuple[float, ...]
    target: float
    trailing_mean: float
    trailing_slope: float
    membership_basis: str = ""

    def __post_init__(self) -> None:
        """Targets and ratios must be positive."""
        if not self.target > 0:
            raise NotApplicableError(f"Ratio target must be positive, got {self.target}")
        if any(q <= 0 for q in self.ratios):
            raise ValueError("Ratio values must be positive")

    @property
    def relative_gap(self) -> float:
        """|trailing mean / target - 1|."""
        return abs(self.trailing_mean / self.target - 1)


def membership_basis(f: SpectralDensity) -> str:
    """The sufficient condition used for admitting f to the weakly varying class.

    Only densities positive almost everywhere, i.e. with finitely many zeros,
    are admitted; there is no general test.
    """
    zeros = f.zero_set
    if any(s.kind is SingularityKind.UNKNOWN for s in f.singularities):
        return "unverified: unannotated zero"
    if not zeros:
        return "positive everywhere"
    points = ", ".join(f"{z:.6g}" for z in zeros)
    return f"positive almost everywhere: zeros only at {{{points}}}"


def ratio_trace(
    numerator: PredictionErrorSeries,
    denominator: PredictionErrorSeries,
    grid: tuple[int, ...],
) -> list[float]:
    """numerator.at(n) / denominator.at(n) at each grid order."""
    return [float(numerator.at(n) / denominator.at(n)) for n in grid]


def _diagnostics(
    numerator: PredictionErrorSeries,
    denominator: PredictionErrorSeries,
    target: mpmath.mpf,
    basis: str,
) -> RatioDiagnostics:
    grid = geometric_grid(min(len(numerator), len(denominator)))
    ratios = ratio_trace(numerator, denominator, grid)
    mean, slope = _trailing(grid, ratios)
    return RatioDiagnostics(
        grid=grid,
        ratios=tuple(ratios),
        target=float(target),
        trailing_mean=mean,
        trailing_slope=slope,
        membership_basis=basis,
    )


def _factor_target(g: SpectralDensity, precision_bits: int) -> mpmath.mpf:
    result = geometric_mean(g, precision_bits)
    if result.divergent or result.value == 0:
        raise NotApplicableError(f"G({g.label}) = 0: '{g.label}' cannot be a ratio factor")
    return result.value


def _ratio_against(
    f: SpectralDensity,
    base: PredictionErrorSeries,
    g: SpectralDensity,
    n_max: int,
    config: PredictionConfig,
) -> RatioDiagnostics:
    target = _factor_target(g, config.precision_bits)
    fg = product(f, g)
    if not fg.integrable:
        raise NotApplicableError(f"'{fg.label}' is not integrable")
    series = prediction_errors(fg, n_max, config)
    diagnostics = _diagnostics(series, base, target, membership_basis(f))
    logger.info(
        "ratio '%s' / '%s': trailing mean %.6g, target %.6g",
        fg.label,
        f.label,
        diagnostics.trailing_mean,
        diagnostics.target,
    )
    return diagnostics


def ratio_limit(
    f: SpectralDensity,
    g: SpectralDensity,
    n_max: int,
    config: Optional[PredictionConfig] = None,
) -> RatioDiagnostics:
    """Trace sigma_n^2(fg)/sigma_n^2(f) against its limit G(g).

    Raises:
        NotApplicableError: G(g) is zero or divergent, or f*g is not integrable.
        UndecidableDivergenceError: Whether G(g) vanishes cannot be decided.
    """
    config = config or PredictionConfig()
    base = prediction_errors(f, n_max, config)
    return _ratio_against(f, base, g, n_max, config)


def _zeros_match(f: SpectralDensity, f_hat: SpectralDensity) -> bool:
    def zeros(d: SpectralDensity) -> list:
        return [s.location for s in d.singularities if s.is_zero]

    ours, theirs = zeros(f), zeros(f_hat)
    return len(ours) == len(theirs) and all(
        any(p.same_point(q) for q in theirs) for p in ours
    )


def common_zero_comparison(
    f: SpectralDensity,
    f_hat: SpectralDensity,
    n_max: int,
    config: Optional[PredictionConfig] = None,
    ratio: Optional[SpectralDensity] = None,
) -> RatioDiagnostics:
    """Trace sigma_n^2(f_hat)/sigma_n^2(f) against G(f_hat/f).

    Args:
        f: The base density.
        f_hat: A density with the same zeros as f.
        n_max: Largest order.
        config: Pipeline settings.
        ratio: A closed form of f_hat/f; built with ``quotient`` when omitted.

    Raises:
        PreconditionError: The zero sets differ, or f_hat/f has no finite
            positive limit at a common zero.
    """
    config = config or PredictionConfig()
    if not _zeros_match(f, f_hat):
        raise PreconditionError(
            f"'{f.label}' and '{f_hat.label}' have different zero sets: "
            f"{f.zero_set} vs {f_hat.zero_set}"
        )
    h = ratio if ratio is not None else quotient(f_hat, f)
    target = geometric_mean(h, config.precision_bits).value
    base = prediction_errors(f, n_max, config)
    other = prediction_errors(f_hat, n_max, config)
    return _diagnostics(other, base, target, membership_basis(f))


@dataclass(frozen=True)
class SeparationTrace:
    """sigma_n^2(f_small)/sigma_n^2(f_big) on a geometric grid.

    Attributes:
        grid: Orders n sampled.
        ratios: The ratio at each order.
        trailing_slope: Slope against log n over [N/2, N].
        decreasing: Whether the trace never increases.
    """

    grid: tuple[int, ...]
    ratios: tuple[float, ...]
    trailing_slope: float
    decreasing: bool

    @property
    def contraction(self) -> float:
        """Last ratio over the first."""
        return self.ratios[-1] / self.ratios[0]


def separation_check(
    f_small: SpectralDensity,
    f_big: SpectralDensity,
    n_max: int,
    config: Optional[PredictionConfig] = None,
    start: int = 1,
) -> SeparationTrace:
    """Trace sigma_n^2(f_small)/sigma_n^2(f_big), expected to fall to 0 when the
    first error is of smaller order than the second.

    Args:
        f_small: Density with the faster decaying errors.
        f_big: Density with the slower decaying errors.
        n_max: Largest order.
        config: Pipeline settings.
        start: Smallest order kept in the trace.
    """
    config = config or PredictionConfig()
    small = prediction_errors(f_small, n_max, config)
    big = prediction_errors(f_big, n_max, config)
    grid = tuple(n for n in geometric_grid(n_max) if n >= start)
    if not grid:
        raise ValueError(f"start {start} exceeds N = {n_max}")
    ratios = ratio_trace(small, big, grid)
    _, slope = _trailing(grid, ratios)
    return SeparationTrace(
        grid=grid,
        ratios=tuple(ratios),
        trailing_slope=slope,
        decreasing=all(b <= a for a, b in zip(ratios, ratios[1:])),
    )


@dataclass(frozen=True)
class CompositionResult:
    """Ratio limits for g1, g2 and g1*g2 over the same base density.

    Attributes:
        first: Diagnostics for g1.
        second: Diagnostics for g2.
        combined: Diagnostics for g1*g2.
        target_gap: |G(g1 g2) / (G(g1) G(g2)) - 1|.
        mean_gap: |combined mean / (first mean * second mean) - 1|.
    """

    first: RatioDiagnostics
    second: RatioDiagnostics
    combined: RatioDiagnostics
    target_gap: float
    mean_gap: float

    @property
    def consistent(self) -> bool:
        """Means compose within twice the individual deviations from their targets."""
        allowance = 2 * (self.first.relative_gap + self.second.relative_gap)
        return self.mean_gap <= allowance + 1e-9


def composition_check(
    f: SpectralDensity,
    g1: SpectralDensity,
    g2: SpectralDensity,
    n_max: int,
    config: Optional[PredictionConfig] = None,
) -> CompositionResult:
    """Compare the ratio limits of g1 and g2 with that of their product."""
    config = config or PredictionConfig()
    base = prediction_errors(f, n_max, config)
    first = _ratio_against(f, base, g1, n_max, config)
    second = _ratio_against(f, base, g2, n_max, config)
    combined = _ratio_against(f, base, product(g1, g2), n_max, config)
    return CompositionResult(
        first=first,
        second=second,
        combined=combined,
        target_gap=abs(combined.target / (first.target * second.target) - 1),
        mean_gap=abs(combined.trailing_mean / (first.trailing_mean * second.trailing_mean) - 1),
    )
