"""The monic polynomial of least norm under a density."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import mpmath

from specpred.errors import IllConditionedError
from specpred.integrate import CovarianceSequence
from specpred.predict.levinson import BREAKDOWN_MARGIN, durbin_recursion

Scalar = Union[mpmath.mpf, mpmath.mpc]


@dataclass(frozen=True)
class PredictorPolynomial:
    """q_n(z) = z^n + c_1 z^(n-1) + ... + c_n.

    Attributes:
        coefficients: c_1 .. c_n.
        sigma2: The minimum squared norm, equal to sigma_n^2.
    """

    coefficients: tuple[Scalar, ...]
    sigma2: mpmath.mpf

    @property
    def degree(self) -> int:
        """n."""
        return len(self.coefficients)

    @property
    def monic(self) -> tuple[Scalar, ...]:
        """All coefficients from the leading 1 down to c_n."""
        return (mpmath.mpf(1), *self.coefficients)

    @property
    def predictor_weights(self) -> tuple[Scalar, ...]:
        """Weights w_k of the one-step predictor sum_k w_k X(-k): w_k = -c_k."""
        return tuple(-c for c in self.coefficients)

    def __call__(self, z: Scalar) -> Scalar:
        """Evaluate q_n at z."""
        return mpmath.polyval(list(self.monic), z)

    def squared_norm(self, r: CovarianceSequence) -> mpmath.mpf:
        """Integral of |q_n(e^{ix})|^2 f(x) dx expressed through covariances."""
        b = self.monic
        with mpmath.workprec(r.precision_bits):
            total = mpmath.fsum(
                b[i] * mpmath.conj(b[j]) * r[j - i]
                for i in range(len(b))
                for j in range(len(b))
            )
        return mpmath.re(total)


def predictor_polynomial(r: CovarianceSequence, n: int) -> PredictorPolynomial:
    """The monic optimal q_n from Levinson's forward weights.

    Raises:
        IllConditionedError: The recursion breaks down before order n.
    """
    if n < 1 or n > r.max_lag:
        raise ValueError(f"Need 1 <= n <= {r.max_lag}, got {n}")
    with mpmath.workprec(r.precision_bits):
        _, _, broken_at, state = durbin_recursion(r, n, BREAKDOWN_MARGIN)
    if broken_at is not None:
        raise IllConditionedError(
            f"Recursion for '{r.label}' broke down at n = {broken_at}",
            last_valid_n=broken_at - 1,
        )
    return PredictorPolynomial(
        coefficients=tuple(-w for w in state.weights),
        sigma2=state.sigma2,
    )
