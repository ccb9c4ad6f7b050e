"""Rosenblatt's constant K(a) in sigma_n^2 ~ K(a) n^{-a} for the Pollaczek density."""

from __future__ import annotations

import mpmath

from specpred.asymptotics.weak_variation import SeriesLike, as_values
from specpred.errors import InvalidParameterError

GAMMA_PRECISION = 96


def rosenblatt_constant(a: float) -> mpmath.mpf:
    """K(a) = Gamma((a+1)/2)^2 / (pi 2^{2-a}).

    Raises:
        InvalidParameterError: a <= 0.
    """
    if not a > 0:
        raise InvalidParameterError(f"a must be positive, got {a}")
    with mpmath.workprec(GAMMA_PRECISION):
        a_mp = mpmath.mpf(a)
        value = mpmath.gamma((a_mp + 1) / 2) ** 2 / (mpmath.pi * mpmath.mpf(2) ** (2 - a_mp))
    return +value


def normalized_rosenblatt_trace(series: SeriesLike, a: float) -> list[mpmath.mpf]:
    """sigma_n^2 n^a / K(a) for n = 1..N; tends to 1 for the Pollaczek density."""
    k = rosenblatt_constant(a)
    return [v * mpmath.mpf(n) ** a / k for n, v in enumerate(as_values(series), start=1)]
