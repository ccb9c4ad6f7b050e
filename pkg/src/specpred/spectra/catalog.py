"""Named densities: constants, MA(1)/AR(1), the Pollaczek density and its companions."""

from __future__ import annotations

import math
from dataclasses import dataclass

import mpmath

from specpred.errors import InvalidParameterError
from specpred.spectra.angles import Angle
from specpred.spectra.density import (
    Singularity,
    SingularityKind,
    SpectralDensity,
    essential_zero,
    kink,
    power_point,
)

ORIGIN = Angle.pi_multiple(0)
HALF_TURN = Angle.pi_multiple(1)

# Inside this distance from 0 the cot(x) - 1/x difference is summed as a series.
RATIO_GUARD_BAND = mpmath.mpf("1e-3")


def _require_positive(name: str, value: float) -> None:
    if not value > 0 or math.isinf(value):
        raise InvalidParameterError(f"{name} must be a positive finite number, got {value}")


def _log_level(variance: float) -> mpmath.mpf:
    return mpmath.log(variance) - mpmath.log(2 * mpmath.pi)


def _log_abs_one_plus(theta: float, x: mpmath.mpf) -> mpmath.mpf:
    """log |1 + theta e^{ix}|^2 as a sum of nonnegative half-angle terms.

    1 + theta^2 + 2 theta cos x = (1 - theta)^2 + 4 theta cos^2(x/2) for theta >= 0,
    and (1 + theta)^2 - 4 theta sin^2(x/2) for theta < 0.
    """
    t = mpmath.mpf(theta)
    if t >= 0:
        return mpmath.log((1 - t) ** 2 + 4 * t * mpmath.cos(x / 2) ** 2)
    return mpmath.log((1 + t) ** 2 - 4 * t * mpmath.sin(x / 2) ** 2)


def constant(c: float) -> SpectralDensity:
    """The constant density f == c."""
    _require_positive("c", c)
    return SpectralDensity(
        log_fn=lambda _x: mpmath.log(c),
        symmetric=True,
        bounded_above=c,
        bounded_below=c,
        label=f"const({c:g})",
    )


def white_noise(variance: float = 1.0) -> SpectralDensity:
    """Spectral density variance/(2*pi) of white noise."""
    _require_positive("variance", variance)
    level = variance / (2 * math.pi)
    return SpectralDensity(
        log_fn=lambda _x: _log_level(variance),
        symmetric=True,
        bounded_above=level,
        bounded_below=level,
        label=f"white({variance:g})",
    )


def ma1(theta: float, variance: float = 1.0) -> SpectralDensity:
    """MA(1) density (variance/2pi)|1 + theta e^{ix}|^2 = (variance/2pi)(1 + theta^2 + 2 theta cos x)."""
    _require_positive("variance", variance)
    if not math.isfinite(theta):
        raise InvalidParameterError(f"theta must be finite, got {theta}")
    level = variance / (2 * math.pi)

    def log_fn(x: mpmath.mpf) -> mpmath.mpf:
        return _log_level(variance) + _log_abs_one_plus(theta, x)

    singularities: tuple[Singularity, ...] = ()
    if abs(theta) == 1:
        zero = HALF_TURN if theta == 1 else ORIGIN
        singularities = (power_point(zero, 2.0, smooth=True),)
    lower = level * (1 - abs(theta)) ** 2
    return SpectralDensity(
        log_fn=log_fn,
        singularities=singularities,
        symmetric=True,
        bounded_above=level * (1 + abs(theta)) ** 2,
        bounded_below=lower if lower > 0 else None,
        label=f"ma1(theta={theta:g})",
    )


def ar1(phi: float, variance: float = 1.0) -> SpectralDensity:
    """AR(1) density (variance/2pi)/|1 - phi e^{ix}|^2, |phi| < 1."""
    _require_positive("variance", variance)
    if not abs(phi) < 1:
        raise InvalidParameterError(f"AR(1) needs |phi| < 1, got {phi}")
    level = variance / (2 * math.pi)

    def log_fn(x: mpmath.mpf) -> mpmath.mpf:
        return _log_level(variance) - _log_abs_one_plus(-phi, x)

    return SpectralDensity(
        log_fn=log_fn,
        symmetric=True,
        bounded_above=level / (1 - abs(phi)) ** 2,
        bounded_below=level / (1 + abs(phi)) ** 2,
        label=f"ar1(phi={phi:g})",
    )


@dataclass(frozen=True)
class PollaczekParams:
    """Parameters of the Pollaczek density.

    Attributes:
        a: Decay exponent, a > 0.
    """

    a: float

    def __post_init__(self) -> None:
        """Validate the exponent."""
        _require_positive("a", self.a)

    def phi(self, x: mpmath.mpf) -> mpmath.mpf:
        """phi(x) = (a/2) cot x."""
        return self.a / 2 * mpmath.cot(x)


def _folded(x: mpmath.mpf) -> mpmath.mpf:
    """Map x in [-pi, pi] to min(|x|, pi - |x|) in [0, pi/2]."""
    x = abs(x)
    return mpmath.pi - x if 2 * x > mpmath.pi else x


def _log_pollaczek(a: float, x: mpmath.mpf) -> mpmath.mpf:
    # f_a(x) = 2 exp(-(pi - x) 2phi) / (1 + exp(-2 pi phi)) for x in (0, pi/2], 2phi = a cot x
    c = mpmath.cot(x)
    return -a * (mpmath.pi - x) * c + mpmath.log(2) - mpmath.log1p(mpmath.exp(-a * mpmath.pi * c))


def pollaczek(params: PollaczekParams) -> SpectralDensity:
    """The Pollaczek density f_a with essential zeros at 0 and +-pi.

    f_a is symmetric about 0 and about pi/2, with maximum 1 at +-pi/2.
    """
    a = params.a
    return SpectralDensity(
        log_fn=lambda x: _log_pollaczek(a, _folded(x)),
        singularities=(essential_zero(ORIGIN), essential_zero(HALF_TURN)),
        symmetric=True,
        bounded_above=1.0,
        label=f"pollaczek(a={a:g})",
    )


def companion_hat1(a: float) -> SpectralDensity:
    """f1(x) = exp(-a pi/|x|), essential zero at 0, maximum e^{-a} at +-pi."""
    _require_positive("a", a)
    return SpectralDensity(
        log_fn=lambda x: -a * mpmath.pi / abs(x),
        singularities=(essential_zero(ORIGIN), kink(HALF_TURN)),
        symmetric=True,
        bounded_above=math.exp(-a),
        label=f"hat1(a={a:g})",
    )


def companion_hat2(a: float) -> SpectralDensity:
    """f2(x) = exp(-a pi/(pi - |x|)), essential zero at +-pi, maximum e^{-a} at 0."""
    _require_positive("a", a)
    return SpectralDensity(
        log_fn=lambda x: -a * mpmath.pi / (mpmath.pi - abs(x)),
        singularities=(kink(ORIGIN), essential_zero(HALF_TURN)),
        symmetric=True,
        bounded_above=math.exp(-a),
        label=f"hat2(a={a:g})",
    )


def companion_hat(a: float) -> SpectralDensity:
    """e^{4a} f1 f2 = exp(4a - a pi^2/(|x|(pi - |x|))), maximum 1 at +-pi/2."""
    _require_positive("a", a)

    def log_fn(x: mpmath.mpf) -> mpmath.mpf:
        y = abs(x)
        return 4 * a - a * mpmath.pi**2 / (y * (mpmath.pi - y))

    return SpectralDensity(
        log_fn=log_fn,
        singularities=(essential_zero(ORIGIN), essential_zero(HALF_TURN)),
        symmetric=True,
        bounded_above=1.0,
        label=f"hat(a={a:g})",
    )


def _cot_minus_reciprocal(x: mpmath.mpf) -> mpmath.mpf:
    """cot x - 1/x without cancellation for small x."""
    if x >= RATIO_GUARD_BAND:
        with mpmath.extraprec(40):
            return mpmath.cot(x) - 1 / x
    # cot x - 1/x = -sum_{n>=1} 2^{2n} |B_{2n}| x^{2n-1} / (2n)!
    total = mpmath.mpf(0)
    eps = mpmath.eps
    n = 1
    while True:
        term = (
            2 ** (2 * n) * abs(mpmath.bernoulli(2 * n)) * x ** (2 * n - 1) / mpmath.factorial(2 * n)
        )
        total -= term
        if term <= eps * abs(total):
            return total
        n += 1


def _log_companion_ratio(a: float, x: mpmath.mpf) -> mpmath.mpf:
    # x in (0, pi/2]; the essential parts -a pi/x cancel analytically.
    c = mpmath.cot(x)
    return (
        4 * a
        - a * mpmath.pi / (mpmath.pi - x)
        + a * (mpmath.pi * _cot_minus_reciprocal(x) - x * c)
        - mpmath.log(2)
        + mpmath.log1p(mpmath.exp(-a * mpmath.pi * c))
    )


def pollaczek_companion_ratio(a: float) -> SpectralDensity:
    """h = hat(a)/pollaczek(a), evaluated in log space.

    The common essential zeros cancel: h is smooth and positive with limit
    e^{2a}/2 at 0 and +-pi, filled in as removable points.
    """
    _require_positive("a", a)
    limit = math.exp(2 * a) / 2

    def log_fn(x: mpmath.mpf) -> mpmath.mpf:
        return _log_companion_ratio(a, _folded(x))

    return SpectralDensity(
        log_fn=log_fn,
        singularities=(
            Singularity(ORIGIN, SingularityKind.REMOVABLE, smooth=True, limit=limit),
            Singularity(HALF_TURN, SingularityKind.REMOVABLE, smooth=True, limit=limit),
        ),
        symmetric=True,
        label=f"hat(a={a:g}) / pollaczek(a={a:g})",
    )
