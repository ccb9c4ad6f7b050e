"""Geometric mean G(f) = exp((1/2pi) integral of log f) and the Szego verdict."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from enum import Enum

import mpmath

from specpred.errors import UndecidableDivergenceError
from specpred.integrate.covariance import DEFAULT_PRECISION
from specpred.integrate.quadrature import integrate
from specpred.spectra import SingularityKind, SpectralDensity

logger = logging.getLogger(__name__)

# log f below this outside zero neighbourhoods points at an unannotated deep zero.
DIVERGENCE_THRESHOLD = -1000
_SCAN_POINTS = 1024
_ZERO_NEIGHBOURHOOD = 1e-3


class Verdict(Enum):
    """Outcome of the Szego condition."""

    DETERMINISTIC = "deterministic"
    NONDETERMINISTIC = "nondeterministic"
    UNDECIDABLE = "undecidable"


@dataclass(frozen=True)
class GeometricMeanResult:
    """G(f) together with the divergence flag.

    Attributes:
        value: G(f) >= 0; 0 when divergent.
        divergent: Whether the log-integral is -infinity.
        est_error: Absolute error bound on the log-integral.
        log_integral: The log-integral itself when it converges.
    """

    value: mpmath.mpf
    divergent: bool
    est_error: float = 0.0
    log_integral: mpmath.mpf = mpmath.ninf

    @property
    def log_value(self) -> mpmath.mpf:
        """log G(f), -inf when divergent."""
        return self.log_integral / (2 * mpmath.pi)


def _scan_for_hidden_zeros(f: SpectralDensity) -> None:
    zeros = [mpmath.mpf(z) for z in f.zero_set]
    with mpmath.workprec(64):
        step = 2 * mpmath.pi / _SCAN_POINTS
        for j in range(_SCAN_POINTS):
            x = -mpmath.pi + (j + mpmath.mpf(1) / 3) * step
            if any(abs(x - z) < _ZERO_NEIGHBOURHOOD for z in zeros):
                continue
            if f.log_eval(x) < DIVERGENCE_THRESHOLD:
                raise UndecidableDivergenceError(
                    f"'{f.label}' has log f < {DIVERGENCE_THRESHOLD} at {mpmath.nstr(x, 8)} "
                    "with no zero annotated nearby"
                )


def geometric_mean(
    f: SpectralDensity, precision_bits: int = DEFAULT_PRECISION
) -> GeometricMeanResult:
    """Compute G(f), deciding divergence from the zero annotations.

    An essential zero makes the log-integral diverge; power zeros and poles
    leave it finite.

    Raises:
        UndecidableDivergenceError: A zero is unannotated, or log f is
            pathologically small away from every annotated zero.
        PrecisionError: The log-integral did not converge to the target.
    """
    kinds = {s.kind for s in f.singularities}
    if SingularityKind.ESSENTIAL in kinds:
        logger.info("'%s' has an essential zero: G = 0", f.label)
        return GeometricMeanResult(value=mpmath.mpf(0), divergent=True)
    if SingularityKind.UNKNOWN in kinds:
        raise UndecidableDivergenceError(
            f"'{f.label}' has a zero without local annotation; divergence cannot be decided"
        )
    _scan_for_hidden_zeros(f)
    with mpmath.workprec(precision_bits):
        tolerance = mpmath.mpf(2) ** (-precision_bits // 2)
        try:
            estimate = integrate(f.log_eval, f.breakpoints(), tolerance)
        except (ValueError, ZeroDivisionError) as exc:
            raise UndecidableDivergenceError(
                f"log f of '{f.label}' could not be evaluated: {exc}"
            ) from exc
        total = estimate.value
        if mpmath.isnan(total) or mpmath.isinf(total):
            raise UndecidableDivergenceError(f"The log-integral of '{f.label}' is {total}")
        value = mpmath.exp(total / (2 * mpmath.pi))
    return GeometricMeanResult(
        value=value,
        divergent=False,
        est_error=estimate.error,
        log_integral=total,
    )


def szego_condition(f: SpectralDensity, precision_bits: int = DEFAULT_PRECISION) -> Verdict:
    """Classify f as deterministic, nondeterministic, or undecidable."""
    try:
        result = geometric_mean(f, precision_bits)
    except UndecidableDivergenceError as exc:
        logger.info("Szego condition undecidable: %s", exc.message)
        return Verdict.UNDECIDABLE
    if result.divergent or result.value == 0:
        return Verdict.DETERMINISTIC
    return Verdict.NONDETERMINISTIC
