"""End-to-end sigma_n^2 from a density, with precision escalation."""

from __future__ import annotations

import logging
from dataclasses import dataclass, replace
from typing import Optional

import mpmath

from specpred.errors import IllConditionedError, InvalidParameterError, PSDViolationError
from specpred.integrate import DEFAULT_PRECISION, covariance_sequence, integrate_density
from specpred.predict.levinson import BREAKDOWN_MARGIN, PredictionErrorSeries, levinson
from specpred.predict.oracle import ORACLE_MAX_ORDER, determinant_oracle
from specpred.spectra import SpectralDensity, scale

logger = logging.getLogger(__name__)

PRECISION_LADDER = (128, 256, 512, 1024)


@dataclass(frozen=True)
class PredictionConfig:
    """Numerical settings for ``prediction_errors``.

    Attributes:
        precision_bits: Starting mantissa width; must be on the ladder.
        max_precision: Last rung of the escalation ladder.
        breakdown_margin: |alpha_k| >= 1 - margin counts as breakdown.
        spot_orders: Orders checked against the determinant oracle.
        spot_tolerance: Relative agreement required at the spot orders.
        normalize: Rescale the density so that r(0) = 1 first.
    """

    precision_bits: int = DEFAULT_PRECISION
    max_precision: int = 1024
    breakdown_margin: float = BREAKDOWN_MARGIN
    spot_orders: tuple[int, ...] = (8, 16, 32)
    spot_tolerance: float = 1e-8
    normalize: bool = False

    def __post_init__(self) -> None:
        """Validate the ladder bounds."""
        if self.precision_bits not in (64, *PRECISION_LADDER):
            raise InvalidParameterError(
                f"precision_bits must be one of 64, 128, 256, 512, 1024; got {self.precision_bits}"
            )
        if self.max_precision < self.precision_bits:
            raise InvalidParameterError("max_precision must not be below precision_bits")

    def ladder(self) -> list[int]:
        """Mantissa widths to try, in order."""
        rungs = [self.precision_bits]
        while 2 * rungs[-1] <= self.max_precision:
            rungs.append(2 * rungs[-1])
        return rungs


class _SpotCheckFailure(Exception):
    def __init__(self, n: int, gap: float) -> None:
        self.n = n
        self.gap = gap
        super().__init__(f"oracle disagreement {gap:.3e} at n = {n}")


def _spot_check(
    series: PredictionErrorSeries, expected_values: dict[int, mpmath.mpf], tol: float
) -> str:
    outcomes = []
    for n, expected in sorted(expected_values.items()):
        gap = float(abs(series.at(n) / expected - 1))
        if gap > tol:
            raise _SpotCheckFailure(n, gap)
        outcomes.append(f"n={n}:{gap:.1e}")
    return ";".join(outcomes) or "none"


def normalized(f: SpectralDensity, precision_bits: int = DEFAULT_PRECISION) -> SpectralDensity:
    """f scaled by 1/r(0), so that its covariances start with r(0) = 1."""
    mass = integrate_density(f, precision_bits).value
    return scale(f, float(1 / mass))


def prediction_errors(
    f: SpectralDensity, n_max: int, config: Optional[PredictionConfig] = None
) -> PredictionErrorSeries:
    """sigma_1^2 .. sigma_N^2 of f.

    Covariances and the recursion run at one precision. A breakdown, a failed
    factorization or an oracle disagreement at the spot orders reruns the
    whole pipeline on the next rung of the precision ladder.

    Raises:
        IllConditionedError: Every rung failed; carries the best partial series.
    """
    config = config or PredictionConfig()
    if config.normalize:
        f = normalized(f, config.precision_bits)
    degraded_from: Optional[int] = None
    best_partial: Optional[PredictionErrorSeries] = None
    for bits in config.ladder():
        r = covariance_sequence(f, n_max, bits)
        try:
            series = levinson(r, n_max, margin=config.breakdown_margin, max_precision=bits)
            orders = [n for n in config.spot_orders if n <= min(n_max, ORACLE_MAX_ORDER)]
            oracle = {n: determinant_oracle(r, n, bits) for n in orders}
            spots = _spot_check(series, oracle, config.spot_tolerance)
        except IllConditionedError as exc:
            degraded_from = degraded_from or exc.last_valid_n + 1
            if exc.partial is not None and (
                best_partial is None or len(exc.partial) > len(best_partial)
            ):
                best_partial = exc.partial
            logger.warning("'%s': %s", f.label, exc.message)
            continue
        except PSDViolationError as exc:
            degraded_from = degraded_from or exc.minor
            logger.warning("'%s': %s at %d bits", f.label, exc.message, bits)
            continue
        except _SpotCheckFailure as exc:
            degraded_from = degraded_from or exc.n
            logger.warning("'%s': %s at %d bits", f.label, exc, bits)
            continue
        logger.info("'%s': %d orders at %d bits, spot checks %s", f.label, n_max, bits, spots)
        return replace(
            series,
            degraded_from=degraded_from,
            provenance={
                "precision_bits": str(bits),
                "covariance_method": r.method,
                "covariance_error": f"{r.est_error:.3e}",
                "spot_checks": spots,
                "normalized": str(config.normalize).lower(),
            },
            label=f.label,
        )
    last_valid = len(best_partial) if best_partial is not None else 0
    raise IllConditionedError(
        f"'{f.label}' is ill-conditioned up to {config.max_precision} bits; "
        f"valid through n = {last_valid}",
        last_valid_n=last_valid,
        partial=best_partial,
    )
