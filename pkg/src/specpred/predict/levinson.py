"""Levinson-Durbin recursion for one-step prediction errors."""

from __future__ import annotations

import logging
from collections.abc import Mapping
from dataclasses import dataclass, field
from typing import Optional, Union

import mpmath

from specpred.errors import IllConditionedError
from specpred.integrate import CovarianceSequence

logger = logging.getLogger(__name__)

BREAKDOWN_MARGIN = 1e-10
MAX_PRECISION = 1024

Scalar = Union[mpmath.mpf, mpmath.mpc]


@dataclass(frozen=True)
class PredictionErrorSeries:
    """sigma_n^2 for n = 1..N and the reflection coefficients behind them.

    Attributes:
        sigma2: sigma_1^2 .. sigma_N^2.
        reflection: alpha_1 .. alpha_N, |alpha_k| < 1.
        r0: r(0), i.e. sigma_0^2.
        precision_bits: Mantissa width of the run that produced the values.
        degraded_from: Order at which a breakdown forced a precision escalation.
        provenance: Free-form run facts (covariance method, spot checks, ...).
        label: Label of the source density.
    """

    sigma2: tuple[mpmath.mpf, ...]
    reflection: tuple[Scalar, ...]
    r0: mpmath.mpf
    precision_bits: int
    degraded_from: Optional[int] = None
    provenance: Mapping[str, str] = field(default_factory=dict)
    label: str = ""

    def __len__(self) -> int:
        """Number of computed orders N."""
        return len(self.sigma2)

    def at(self, n: int) -> mpmath.mpf:
        """sigma_n^2 for 0 <= n <= N (n = 0 gives r(0))."""
        if n == 0:
            return self.r0
        return self.sigma2[n - 1]

    def product_form(self, n: int) -> mpmath.mpf:
        """r(0) prod_{k <= n} (1 - |alpha_k|^2), recomputed from the reflections."""
        with mpmath.workprec(self.precision_bits):
            value = +self.r0
            for alpha in self.reflection[:n]:
                value *= 1 - abs(alpha) ** 2
            return value

    def truncated(self, n: int) -> PredictionErrorSeries:
        """The first n orders."""
        return PredictionErrorSeries(
            sigma2=self.sigma2[:n],
            reflection=self.reflection[:n],
            r0=self.r0,
            precision_bits=self.precision_bits,
            degraded_from=self.degraded_from,
            provenance=self.provenance,
            label=self.label,
        )


@dataclass(frozen=True)
class RecursionState:
    """Forward predictor weights phi_1..phi_n and the error sigma_n^2 after n steps."""

    weights: tuple[Scalar, ...]
    sigma2: mpmath.mpf


def durbin_recursion(
    r: CovarianceSequence, n_max: int, margin: float
) -> tuple[list[mpmath.mpf], list[Scalar], Optional[int], RecursionState]:
    """Run Durbin's recursion at the current working precision.

    Returns:
        sigma^2 values, reflections, the order at which it broke down (or None),
        and the state after the last valid order.
    """
    sigma = mpmath.mpf(r.r0)
    phi: list[Scalar] = []
    sigma2: list[mpmath.mpf] = []
    reflection: list[Scalar] = []
    limit = 1 - mpmath.mpf(margin)
    for n in range(1, n_max + 1):
        acc = r[n] - mpmath.fsum(phi[j - 1] * r[n - j] for j in range(1, n))
        kappa = acc / sigma
        if abs(kappa) >= limit:
            return sigma2, reflection, n, RecursionState(tuple(phi), sigma)
        phi = [phi[j - 1] - kappa * mpmath.conj(phi[n - j - 1]) for j in range(1, n)] + [kappa]
        sigma = sigma * (1 - abs(kappa) ** 2)
        if sigma <= 0:
            return sigma2, reflection, n, RecursionState(tuple(phi), sigma)
        sigma2.append(sigma)
        reflection.append(kappa)
    return sigma2, reflection, None, RecursionState(tuple(phi), sigma)


def levinson(
    r: CovarianceSequence,
    n_max: int,
    *,
    margin: float = BREAKDOWN_MARGIN,
    max_precision: int = MAX_PRECISION,
) -> PredictionErrorSeries:
    """sigma_n^2 for n = 1..n_max from covariances.

    On breakdown (|alpha_k| >= 1 - margin or sigma_k^2 <= 0) the recursion is
    rerun at doubled working precision, up to ``max_precision`` bits.

    Raises:
        IllConditionedError: The breakdown persists at ``max_precision``; the
            partial series up to the last valid order is attached.
    """
    if n_max < 1 or n_max > r.max_lag:
        raise ValueError(f"Need 1 <= N <= {r.max_lag}, got {n_max}")
    if r.r0 <= 0:
        raise ValueError("r(0) must be positive")
    bits = r.precision_bits
    degraded_from: Optional[int] = None
    while True:
        with mpmath.workprec(bits):
            sigma2, reflection, broken_at, _ = durbin_recursion(r, n_max, margin)
        if broken_at is None:
            return PredictionErrorSeries(
                sigma2=tuple(sigma2),
                reflection=tuple(reflection),
                r0=r.r0,
                precision_bits=bits,
                degraded_from=degraded_from,
                label=r.label,
            )
        degraded_from = degraded_from or broken_at
        partial = PredictionErrorSeries(
            sigma2=tuple(sigma2),
            reflection=tuple(reflection),
            r0=r.r0,
            precision_bits=bits,
            degraded_from=degraded_from,
            label=r.label,
        )
        if 2 * bits > max_precision:
            raise IllConditionedError(
                f"Levinson recursion for '{r.label}' broke down at n = {broken_at} "
                f"at {bits} bits",
                last_valid_n=broken_at - 1,
                partial=partial,
            )
        logger.warning("breakdown at n = %d with %d bits; retrying at %d", broken_at, bits, 2 * bits)
        bits *= 2
