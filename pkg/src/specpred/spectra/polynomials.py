"""Real trigonometric and algebraic polynomials used as singular factors."""

from __future__ import annotations

import logging
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Union

import mpmath
import numpy as np

from specpred.errors import InvalidConstructionError, InvalidParameterError
from specpred.spectra.angles import Angle

logger = logging.getLogger(__name__)

NONNEGATIVE_SAMPLES = 2**16
NONNEGATIVE_TOLERANCE = 1e-12

# Roots are refined at this precision so that panel splits stay exact up to 1024-bit runs.
_ROOT_PRECISION = 1100
_CLUSTER_RADIUS = 1e-6


@dataclass(frozen=True)
class Root:
    """A real root of a polynomial factor.

    Attributes:
        location: Position on the circle.
        multiplicity: Root multiplicity.
    """

    location: Angle
    multiplicity: int


def _cluster(values: list[complex]) -> list[tuple[complex, int]]:
    clusters: list[list[complex]] = []
    for value in values:
        for group in clusters:
            if abs(group[0] - value) < _CLUSTER_RADIUS:
                group.append(value)
                break
        else:
            clusters.append([value])
    return [(complex(np.mean(group)), len(group)) for group in clusters]


@dataclass(frozen=True)
class TrigPolynomial:
    """t(x) = c0 + sum_k (c_k cos k(x - phase) + s_k sin k(x - phase)).

    Attributes:
        cos_coeffs: c_0 .. c_d.
        sin_coeffs: s_1 .. s_d.
        phase: Argument shift, kept exact so that sin(x - x0) has roots at x0 + k*pi.
        nonnegative: Whether t >= 0 has been requested; certified by sampling.
    """

    cos_coeffs: tuple[float, ...] = (0.0,)
    sin_coeffs: tuple[float, ...] = ()
    phase: Angle = field(default_factory=Angle)
    nonnegative: bool = False

    def __post_init__(self) -> None:
        """Validate coefficients and certify the nonnegative flag."""
        if not self.cos_coeffs:
            raise InvalidParameterError("A trigonometric polynomial needs a constant term")
        if all(c == 0 for c in (*self.cos_coeffs, *self.sin_coeffs)):
            raise InvalidConstructionError("The zero trigonometric polynomial is not a factor")
        if self.nonnegative:
            minimum = float(self.sample().min())
            if minimum < -NONNEGATIVE_TOLERANCE:
                raise InvalidConstructionError(
                    f"{self} is not nonnegative: minimum {minimum:.3e} on the sample grid"
                )

    @classmethod
    def sine(cls, center: Union[Angle, float] = 0.0) -> TrigPolynomial:
        """sin(x - center)."""
        return cls(cos_coeffs=(0.0,), sin_coeffs=(1.0,), phase=Angle.of(center))

    @property
    def degree(self) -> int:
        """Index of the last nonzero harmonic."""
        for k in range(max(len(self.cos_coeffs) - 1, len(self.sin_coeffs)), 0, -1):
            if self._cos(k) != 0 or self._sin(k) != 0:
                return k
        return 0

    def _cos(self, k: int) -> float:
        return self.cos_coeffs[k] if k < len(self.cos_coeffs) else 0.0

    def _sin(self, k: int) -> float:
        return self.sin_coeffs[k - 1] if 1 <= k <= len(self.sin_coeffs) else 0.0

    @property
    def is_even(self) -> bool:
        """t(-x) == t(x)."""
        return self.phase.is_zero() and not any(self.sin_coeffs)

    @property
    def is_odd(self) -> bool:
        """t(-x) == -t(x)."""
        return self.phase.is_zero() and not any(self.cos_coeffs)

    def __call__(self, x: mpmath.mpf) -> mpmath.mpf:
        """Evaluate at the working precision."""
        u = mpmath.mpf(x) - self.phase.value()
        total = mpmath.mpf(self._cos(0))
        for k in range(1, self.degree + 1):
            c, s = self._cos(k), self._sin(k)
            if c:
                total += c * mpmath.cos(k * u)
            if s:
                total += s * mpmath.sin(k * u)
        return total

    def derivative(self) -> TrigPolynomial:
        """The derivative, same phase, no nonnegativity claim."""
        d = self.degree
        if d == 0:
            raise InvalidConstructionError("A constant has no nonzero derivative")
        cos_coeffs = (0.0, *(k * self._sin(k) for k in range(1, d + 1)))
        sin_coeffs = tuple(-k * self._cos(k) for k in range(1, d + 1))
        return TrigPolynomial(cos_coeffs=cos_coeffs, sin_coeffs=sin_coeffs, phase=self.phase)

    def sample(self, count: int = NONNEGATIVE_SAMPLES) -> np.ndarray:
        """Evaluate in double precision on an equispaced grid of the circle."""
        u = np.linspace(-np.pi, np.pi, count, endpoint=False)
        total = np.full(count, self._cos(0))
        for k in range(1, self.degree + 1):
            total += self._cos(k) * np.cos(k * u) + self._sin(k) * np.sin(k * u)
        return total

    def roots(self) -> tuple[Root, ...]:
        """Real roots on the circle with multiplicities.

        Roots are located on the companion polynomial in z = exp(iu), snapped to
        k*pi/q when within tolerance, otherwise refined at high precision.
        """
        d = self.degree
        if d == 0:
            return ()
        # Coefficients of z^d t, highest power first.
        coefficients = [0j] * (2 * d + 1)
        coefficients[d] = complex(self._cos(0))
        for k in range(1, d + 1):
            c, s = self._cos(k), self._sin(k)
            coefficients[d + k] = complex(c, -s) / 2
            coefficients[d - k] = complex(c, s) / 2
        located = np.roots(coefficients[::-1])
        on_circle = [z for z in located if abs(abs(z) - 1) < _CLUSTER_RADIUS]
        roots = []
        for z, multiplicity in _cluster(on_circle):
            roots.append(Root(self._refine(float(np.angle(z)), multiplicity), multiplicity))
        logger.debug("%s has %d real roots", self, len(roots))
        return tuple(roots)

    def _refine(self, u: float, multiplicity: int) -> Angle:
        snapped = Angle.snapped(u)
        if not snapped.offset:
            return (snapped + self.phase).normalized()
        target = self
        for _ in range(multiplicity - 1):
            target = target.derivative()
        with mpmath.workprec(_ROOT_PRECISION):
            shift = self.phase.value()
            refined = mpmath.findroot(lambda x: target(x + shift), mpmath.mpf(u))
        return (Angle.of(refined) + self.phase).normalized()

    def __str__(self) -> str:
        """Render as a short expression."""
        terms = [f"{self._cos(0):g}"] if self._cos(0) else []
        arg = "x" if self.phase.is_zero() else f"(x - {self.phase})"
        for k in range(1, self.degree + 1):
            harmonic = arg if k == 1 else f"{k}{arg}"
            if self._cos(k):
                terms.append(f"{self._cos(k):g}*cos {harmonic}")
            if self._sin(k):
                terms.append(f"{self._sin(k):g}*sin {harmonic}")
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class AlgebraicPolynomial:
    """q(x) = c_0 + c_1 x + ... + c_m x^m with real coefficients.

    Attributes:
        coefficients: c_0 .. c_m, leading coefficient nonzero when m >= 1.
    """

    coefficients: tuple[float, ...]

    def __post_init__(self) -> None:
        """Validate the coefficient list."""
        if not self.coefficients:
            raise InvalidParameterError("An algebraic polynomial needs at least one coefficient")
        if len(self.coefficients) > 1 and self.coefficients[-1] == 0:
            raise InvalidParameterError("Leading coefficient must be nonzero")
        if all(c == 0 for c in self.coefficients):
            raise InvalidConstructionError("The zero polynomial is not a factor")

    @property
    def degree(self) -> int:
        """Polynomial degree m."""
        return len(self.coefficients) - 1

    @property
    def parity(self) -> int:
        """+1 for even, -1 for odd, 0 for neither."""
        if not any(self.coefficients[1::2]):
            return 1
        if not any(self.coefficients[0::2]):
            return -1
        return 0

    def __call__(self, x: mpmath.mpf) -> mpmath.mpf:
        """Evaluate at the working precision."""
        return mpmath.polyval(list(reversed(self.coefficients)), x)

    def derivative(self) -> AlgebraicPolynomial:
        """The derivative polynomial."""
        if self.degree == 0:
            raise InvalidConstructionError("A constant has no nonzero derivative")
        return AlgebraicPolynomial(
            tuple(k * c for k, c in enumerate(self.coefficients) if k > 0)
        )

    def roots(self) -> tuple[Root, ...]:
        """Real roots inside (-pi, pi] with multiplicities."""
        if self.degree == 0:
            return ()
        located = np.roots(list(reversed(self.coefficients)))
        real = [
            complex(z.real, 0.0)
            for z in located
            if abs(z.imag) < _CLUSTER_RADIUS and -np.pi - 1e-12 < z.real <= np.pi + 1e-12
        ]
        roots = []
        for z, multiplicity in _cluster(real):
            roots.append(Root(self._refine(z.real, multiplicity), multiplicity))
        return tuple(roots)

    def _refine(self, x: float, multiplicity: int) -> Angle:
        snapped = Angle.snapped(x)
        if not snapped.offset:
            return snapped
        target = self
        for _ in range(multiplicity - 1):
            target = target.derivative()
        with mpmath.workprec(_ROOT_PRECISION):
            refined = mpmath.findroot(target, mpmath.mpf(x))
        return Angle.of(refined)

    def __str__(self) -> str:
        """Render as a short expression."""
        terms = []
        for k, c in enumerate(self.coefficients):
            if c:
                terms.append(f"{c:g}" if k == 0 else f"{c:g}*x" + (f"^{k}" if k > 1 else ""))
        return " + ".join(terms)


# Bits kept beyond those lost to cancellation near a root.
_GUARD_BITS = 20


def _circle_distance(x: mpmath.mpf, y: mpmath.mpf) -> mpmath.mpf:
    two_pi = 2 * mpmath.pi
    delta = x - y
    return abs(delta - two_pi * mpmath.nint(delta / two_pi))


def log_abs(
    p: Union[TrigPolynomial, AlgebraicPolynomial], x: mpmath.mpf, roots: Sequence[Root]
) -> mpmath.mpf:
    """log|p(x)| at the working precision, also within a few ulps of a real root.

    Near a root of multiplicity m at distance d the sum p(x) cancels about
    m*log2(1/d) bits, so p is evaluated with that many extra bits.

    Args:
        p: The polynomial.
        x: Evaluation point.
        roots: Real roots of p, as returned by ``p.roots()``.
    """
    bits = mpmath.mp.prec
    extra = _GUARD_BITS
    with mpmath.extraprec(bits):
        for root in roots:
            gap = _circle_distance(mpmath.mpf(x), root.location.value())
            lost = 2 * bits if gap == 0 else max(0, int(-mpmath.log(gap, 2)) + 1)
            extra = max(extra, root.multiplicity * lost + _GUARD_BITS)
    with mpmath.extraprec(extra):
        value = p(x)
    return mpmath.log(abs(value))
