"""Panel-split double-exponential quadrature on [-pi, pi]."""

from __future__ import annotations

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import Callable, Optional

import mpmath

from specpred.errors import PrecisionError

logger = logging.getLogger(__name__)

# Extra tanh-sinh levels tried beyond mpmath's default before giving up.
DEGREE_BUDGET = 4


@dataclass(frozen=True)
class Estimate:
    """A quadrature value with its absolute error estimate.

    Attributes:
        value: The integral at the working precision.
        error: Absolute error estimate as a float.
    """

    value: mpmath.mpf
    error: float


def oscillation_points(points: Sequence[mpmath.mpf], k: int) -> list[mpmath.mpf]:
    """Refine panel boundaries so that each panel holds at most two periods of cos(kx)."""
    if k <= 1:
        return list(points)
    refined = [points[0]]
    for left, right in zip(points, points[1:]):
        pieces = max(1, math.ceil(float((right - left) * k / (4 * mpmath.pi))))
        width = (right - left) / pieces
        refined.extend(left + j * width for j in range(1, pieces))
        refined.append(right)
    return refined


def integrate(
    fn: Callable[[mpmath.mpf], mpmath.mpf],
    points: Sequence[mpmath.mpf],
    tolerance: mpmath.mpf,
    default_degree: Optional[int] = None,
) -> Estimate:
    """Integrate over consecutive panels with tanh-sinh, escalating the degree.

    Must be called inside the caller's ``mpmath.workprec`` block.

    Args:
        fn: Integrand, finite in the open panels.
        points: Panel boundaries, increasing.
        tolerance: Absolute error target.
        default_degree: Starting tanh-sinh degree; mpmath's default when None.

    Returns:
        The integral and its error estimate.

    Raises:
        PrecisionError: The target was not met within the degree budget.
    """
    degree = default_degree or _default_degree()
    best: Optional[Estimate] = None
    for extra in range(DEGREE_BUDGET + 1):
        value, error = mpmath.quad(fn, list(points), error=True, maxdegree=degree + extra)
        estimate = Estimate(value, float(error))
        if best is None or estimate.error < best.error:
            best = estimate
        if error <= tolerance:
            return estimate
        logger.debug(
            "quadrature error %.3e above %.3e at degree %d over %d panels",
            float(error),
            float(tolerance),
            degree + extra,
            len(points) - 1,
        )
    assert best is not None
    raise PrecisionError(
        f"Quadrature error {best.error:.3e} exceeds target {float(tolerance):.3e}",
        best_effort_bound=best.error,
    )


def _default_degree() -> int:
    # Same starting level mpmath guesses for tanh-sinh at the working precision.
    return int(4 + max(0, math.log2(mpmath.mp.prec / 30.0)))
