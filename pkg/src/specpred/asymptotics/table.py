"""The table of Rosenblatt factors and companion constants over a."""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass

import mpmath

from specpred.asymptotics.constants import rosenblatt_constant
from specpred.integrate import DEFAULT_PRECISION, geometric_mean
from specpred.spectra import pollaczek_companion_ratio

logger = logging.getLogger(__name__)

TABLE_A_VALUES = (0.1, 0.5, 1.0, 1.5, 2.0, 3.0, 3.3, 3.4, 5.0, 10.0)
TABLE_COLUMNS = ("a", "rosenblatt", "c_hat", "c")


@dataclass(frozen=True)
class Table1Row:
    """One row of the table.

    Attributes:
        a: The Pollaczek parameter.
        rosenblatt: K(a) = Gamma((a+1)/2)^2 / (pi 2^{2-a}).
        c_hat: G(h) for h = hat(a)/pollaczek(a), the limit of
            sigma_n^2(hat)/sigma_n^2(pollaczek).
        c: rosenblatt * c_hat, the constant in sigma_n^2(hat) ~ c n^{-a}.
    """

    a: float
    rosenblatt: mpmath.mpf
    c_hat: mpmath.mpf
    c: mpmath.mpf

    def formatted(self, decimals: int = 3) -> tuple[str, ...]:
        """Row cells at fixed decimals."""
        return (
            f"{self.a:.1f}",
            *(f"{float(v):.{decimals}f}" for v in (self.rosenblatt, self.c_hat, self.c)),
        )


def table1_row(a: float, precision_bits: int = DEFAULT_PRECISION) -> Table1Row:
    """Compute one row for parameter a."""
    c_hat = geometric_mean(pollaczek_companion_ratio(a), precision_bits).value
    with mpmath.workprec(precision_bits):
        k = rosenblatt_constant(a)
        row = Table1Row(a=a, rosenblatt=k, c_hat=c_hat, c=k * c_hat)
    logger.debug("a = %g: G(h) = %s", a, mpmath.nstr(c_hat, 12))
    return row


def table1(
    a_values: Iterable[float] = TABLE_A_VALUES, precision_bits: int = DEFAULT_PRECISION
) -> list[Table1Row]:
    """Rows for every a, in the given order.

    Raises:
        InvalidParameterError: Some a <= 0.
    """
    return [table1_row(a, precision_bits) for a in a_values]
