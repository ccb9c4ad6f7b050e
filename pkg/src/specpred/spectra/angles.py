"""Exact angles on the circle [-pi, pi].

Singular points of a density must be reproduced at whatever working precision
the integrator runs, so an angle is stored as a rational multiple of pi plus an
offset, and only turned into an ``mpf`` on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

import mpmath

AngleLike = Union["Angle", float, int, "mpmath.mpf"]

# Candidate denominators when snapping a numerically located root to k*pi/q.
_SNAP_DENOMINATORS = (1, 2, 3, 4, 6, 8, 12)
_SNAP_TOLERANCE = 1e-9
_REDUCTION_PRECISION = 160


@dataclass(frozen=True)
class Angle:
    """An angle ``turns * pi + offset`` in radians.

    Attributes:
        turns: Rational multiple of pi.
        offset: Additional radians (float, or mpf when located to high precision).
    """

    turns: Fraction = Fraction(0)
    offset: Union[float, mpmath.mpf] = 0.0

    @classmethod
    def of(cls, value: AngleLike) -> Angle:
        """Coerce a number or an Angle into an Angle."""
        if isinstance(value, Angle):
            return value
        return cls(Fraction(0), value if isinstance(value, mpmath.mpf) else float(value))

    @classmethod
    def pi_multiple(cls, numerator: int, denominator: int = 1) -> Angle:
        """Build the exact angle numerator*pi/denominator."""
        return cls(Fraction(numerator, denominator), 0.0)

    @classmethod
    def snapped(cls, radians: float) -> Angle:
        """Build an angle from a float, snapping to k*pi/q when it is that close."""
        ratio = radians / math.pi
        for q in _SNAP_DENOMINATORS:
            k = round(ratio * q)
            if abs(ratio * q - k) < _SNAP_TOLERANCE * q:
                return cls(Fraction(k, q), 0.0)
        return cls(Fraction(0), float(radians))

    def value(self) -> mpmath.mpf:
        """Return the angle at the current mpmath working precision."""
        result = mpmath.mpf(self.offset)
        if self.turns:
            result += mpmath.mpf(self.turns.numerator) / self.turns.denominator * mpmath.pi
        return result

    def __float__(self) -> float:
        """Return the angle as a double."""
        return float(self.turns) * math.pi + float(self.offset)

    def __add__(self, other: AngleLike) -> Angle:
        """Add two angles without normalizing."""
        other = Angle.of(other)
        return Angle(self.turns + other.turns, self.offset + other.offset)

    def __neg__(self) -> Angle:
        """Reflect the angle through zero."""
        return Angle(-self.turns, -self.offset)

    def normalized(self) -> Angle:
        """Reduce into (-pi, pi] by whole turns of 2*pi.

        The rational part is reduced exactly into (-1, 1]; a nonzero offset is
        then folded in with one more exact shift of whole turns.
        """
        turns = self.turns - 2 * math.ceil((self.turns - 1) / 2)
        if not self.offset:
            return Angle(turns, self.offset)
        with mpmath.workprec(_REDUCTION_PRECISION):
            radians = Angle(turns, self.offset).value()
            steps = int(mpmath.ceil((radians - mpmath.pi) / (2 * mpmath.pi)))
        return Angle(turns - 2 * steps, self.offset)

    def is_zero(self) -> bool:
        """Whether the angle is a multiple of 2*pi."""
        normalized = self.normalized()
        return normalized.turns == 0 and float(normalized.offset) == 0.0

    def same_point(self, other: Angle) -> bool:
        """Whether two angles denote the same point of the circle."""
        a, b = self.normalized(), other.normalized()
        if a.turns == b.turns and a.offset == b.offset:
            return True
        with mpmath.workprec(160):
            return bool(abs(a.value() - b.value()) < mpmath.mpf(2) ** -120)

    def __str__(self) -> str:
        """Render as a short human-readable expression."""
        if self.turns and not self.offset:
            num, den = self.turns.numerator, self.turns.denominator
            head = "pi" if abs(num) == 1 else f"{abs(num)}*pi"
            sign = "-" if num < 0 else ""
            return f"{sign}{head}" if den == 1 else f"{sign}{head}/{den}"
        return f"{float(self):.12g}"


def reduce_angle(lam: mpmath.mpf) -> mpmath.mpf:
    """Reduce an mpf angle into [-pi, pi] by multiples of 2*pi."""
    if -mpmath.pi <= lam <= mpmath.pi:
        return lam
    two_pi = 2 * mpmath.pi
    reduced = lam - two_pi * mpmath.floor((lam + mpmath.pi) / two_pi)
    if reduced > mpmath.pi:
        reduced -= two_pi
    return reduced
