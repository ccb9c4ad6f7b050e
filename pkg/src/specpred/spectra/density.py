"""The SpectralDensity type and its singularity annotations.

A density is represented by its logarithm. Every evaluator receives an ``mpf``
already reduced into [-pi, pi] and never sees an exactly declared singular
point; those are answered from the annotations (0 at zeros, +inf at poles, the
filled limit at removable points).
"""

from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Callable, Optional

import mpmath

from specpred.errors import InvalidConstructionError
from specpred.spectra.angles import Angle, AngleLike, reduce_angle

logger = logging.getLogger(__name__)

LogEvaluator = Callable[[mpmath.mpf], mpmath.mpf]

# Relative tolerance used when re-verifying f(-x) == f(x) by sampling.
SYMMETRY_TOLERANCE = mpmath.mpf(10) ** -12


class SingularityKind(Enum):
    """Local behaviour of a density at an annotated point."""

    ESSENTIAL = "essential"
    POWER = "power"
    KINK = "kink"
    REMOVABLE = "removable"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class Singularity:
    """An annotated point of a density.

    Attributes:
        location: Where the point sits on the circle.
        kind: Local behaviour class.
        order: Power exponent for POWER points (positive zero, negative pole).
        smooth: Whether the density is C-infinity through the point.
        limit: Value used at REMOVABLE points.
    """

    location: Angle
    kind: SingularityKind
    order: float = 0.0
    smooth: bool = False
    limit: Optional[float] = None

    @property
    def is_zero(self) -> bool:
        """Whether the density vanishes here."""
        if self.kind in (SingularityKind.ESSENTIAL, SingularityKind.UNKNOWN):
            return True
        return self.kind is SingularityKind.POWER and self.order > 0

    @property
    def is_pole(self) -> bool:
        """Whether the density is unbounded here."""
        return self.kind is SingularityKind.POWER and self.order < 0

    @property
    def integrable(self) -> bool:
        """Whether the density is locally integrable around this point."""
        return not self.is_pole or self.order > -1

    def moved(self, location: Angle) -> Singularity:
        """Return the same annotation at another location."""
        return replace(self, location=location.normalized())

    def describe(self) -> str:
        """One-line description used in messages and provenance."""
        if self.kind is SingularityKind.POWER:
            return f"power {self.order:g} at {self.location}"
        return f"{self.kind.value} at {self.location}"


def essential_zero(location: Angle) -> Singularity:
    """Annotation of an exp(-c/|x - x0|) type zero."""
    return Singularity(location, SingularityKind.ESSENTIAL, smooth=True)


def kink(location: Angle) -> Singularity:
    """Annotation of a continuous point where the derivative jumps."""
    return Singularity(location, SingularityKind.KINK, smooth=False)


def power_point(location: Angle, order: float, smooth: bool = False) -> Singularity:
    """Annotation of |x - x0|^order behaviour."""
    return Singularity(location, SingularityKind.POWER, order=order, smooth=smooth)


@dataclass(frozen=True)
class SpectralDensity:
    """A nonnegative density on [-pi, pi], evaluated through its logarithm.

    Attributes:
        log_fn: Logarithm of the density away from annotated points.
        singularities: Annotated points, at most one per location.
        symmetric: True iff f(-x) == f(x).
        bounded_above: Upper bound M, when known.
        bounded_below: Lower bound m outside zero neighbourhoods, when known.
        bounds_empirical: Whether the bounds were estimated by sampling.
        label: Human-readable construction expression.
    """

    log_fn: LogEvaluator = field(repr=False)
    singularities: tuple[Singularity, ...] = ()
    symmetric: bool = False
    bounded_above: Optional[float] = None
    bounded_below: Optional[float] = None
    bounds_empirical: bool = False
    label: str = "f"

    def __post_init__(self) -> None:
        """Reject duplicate annotations at one location."""
        seen: list[Angle] = []
        for singularity in self.singularities:
            if any(singularity.location.same_point(other) for other in seen):
                raise InvalidConstructionError(
                    f"Two annotations at {singularity.location} in '{self.label}'"
                )
            seen.append(singularity.location)

    def singularity_at(self, lam: mpmath.mpf) -> Optional[Singularity]:
        """Return the annotation sitting exactly at ``lam``, if any."""
        for singularity in self.singularities:
            point = singularity.location.value()
            if lam == point:
                return singularity
            # pi and -pi are the same point of the circle
            if abs(point) == mpmath.pi and abs(lam) == mpmath.pi:
                return singularity
        return None

    def log_eval(self, lam: AngleLike) -> mpmath.mpf:
        """Evaluate log f at ``lam`` (radians or Angle) at the working precision.

        Returns:
            log f(lam); -inf at zeros and +inf at poles.
        """
        x = reduce_angle(lam.value() if isinstance(lam, Angle) else mpmath.mpf(lam))
        singular = self.singularity_at(x)
        if singular is not None:
            if singular.is_zero:
                return mpmath.ninf
            if singular.is_pole:
                return mpmath.inf
            if singular.kind is SingularityKind.REMOVABLE and singular.limit is not None:
                return mpmath.log(singular.limit)
        return self.log_fn(x)

    def eval(self, lam: AngleLike) -> mpmath.mpf:
        """Evaluate f at ``lam``; 0 at declared zeros and +inf at declared poles."""
        value = self.log_eval(lam)
        if value == mpmath.ninf:
            return mpmath.mpf(0)
        if value == mpmath.inf:
            return mpmath.inf
        return mpmath.exp(value)

    __call__ = eval

    @property
    def zero_set(self) -> tuple[float, ...]:
        """Sorted zero locations in [-pi, pi]; pi is listed together with -pi."""
        return _locations(s for s in self.singularities if s.is_zero)

    @property
    def poles(self) -> tuple[float, ...]:
        """Sorted pole locations in [-pi, pi]."""
        return _locations(s for s in self.singularities if s.is_pole)

    @property
    def is_smooth(self) -> bool:
        """Whether f is C-infinity on the circle, annotated points included."""
        return all(s.smooth for s in self.singularities)

    @property
    def integrable(self) -> bool:
        """Whether every declared pole is integrable."""
        return all(s.integrable for s in self.singularities)

    def breakpoints(self) -> list[mpmath.mpf]:
        """Panel boundaries for quadrature: -pi, annotated interior points, pi."""
        interior = []
        for singularity in self.singularities:
            point = reduce_angle(singularity.location.value())
            if -mpmath.pi < point < mpmath.pi:
                interior.append(point)
        return [-mpmath.pi, *sorted(set(interior)), mpmath.pi]

    def relabeled(self, label: str) -> SpectralDensity:
        """Return the same density under another label."""
        return replace(self, label=label)

    def __str__(self) -> str:
        """Return the construction label."""
        return self.label


def _locations(singularities: Iterable[Singularity]) -> tuple[float, ...]:
    points: set[float] = set()
    for singularity in singularities:
        value = float(singularity.location.normalized())
        points.add(value)
        if abs(abs(value) - mpmath.pi) < 1e-15:
            points.update((-float(mpmath.pi), float(mpmath.pi)))
    return tuple(sorted(points))


def from_callable(
    fn: Callable[[mpmath.mpf], mpmath.mpf],
    *,
    singularities: Iterable[Singularity] = (),
    symmetric: bool = False,
    log_space: bool = True,
    bounded_above: Optional[float] = None,
    bounded_below: Optional[float] = None,
    label: str = "custom",
) -> SpectralDensity:
    """Wrap a user evaluator as a density.

    Args:
        fn: log f when ``log_space`` is true, otherwise f itself.
        singularities: Annotations; undeclared zeros should be UNKNOWN.
        symmetric: Declared symmetry flag.
        log_space: Whether ``fn`` returns log values.
        bounded_above: Optional upper bound.
        bounded_below: Optional lower bound.
        label: Display label.

    Returns:
        The wrapped density.
    """
    if log_space:
        log_fn = fn
    else:

        def log_fn(x: mpmath.mpf) -> mpmath.mpf:
            value = fn(x)
            if value < 0:
                raise InvalidConstructionError(f"'{label}' is negative at {mpmath.nstr(x, 8)}")
            return mpmath.log(value) if value > 0 else mpmath.ninf

    return SpectralDensity(
        log_fn=log_fn,
        singularities=tuple(s.moved(s.location) for s in singularities),
        symmetric=symmetric,
        bounded_above=bounded_above,
        bounded_below=bounded_below,
        label=label,
    )


def _sample_points(count: int) -> list[mpmath.mpf]:
    # Irrational step so that no sample lands on a rational multiple of pi.
    step = (2 * mpmath.pi - mpmath.mpf("1e-3")) / count
    start = -mpmath.pi + mpmath.mpf("1e-3") / 2 + step / mpmath.sqrt(5)
    return [start + j * step for j in range(count)]


def verify_symmetry(f: SpectralDensity, samples: int = 257) -> SpectralDensity:
    """Re-check f(-x) == f(x) by sampling and set the flag accordingly."""
    with mpmath.workprec(128):
        for x in _sample_points(samples):
            left, right = f.log_eval(x), f.log_eval(-x)
            if mpmath.isinf(left) or mpmath.isinf(right):
                if left != right:
                    return replace(f, symmetric=False)
                continue
            if abs(mpmath.expm1(left - right)) > SYMMETRY_TOLERANCE:
                logger.debug("'%s' is not symmetric at %s", f.label, mpmath.nstr(x, 8))
                return replace(f, symmetric=False)
    return replace(f, symmetric=True)


def with_empirical_bounds(
    f: SpectralDensity, grid: int = 4096, guard: float = 1e-3
) -> SpectralDensity:
    """Estimate B+- bounds on a dense grid and mark them empirical.

    Points within ``guard`` of a declared zero are excluded from the lower bound.
    """
    zeros = [mpmath.mpf(z) for z in f.zero_set]
    lower, upper = mpmath.inf, mpmath.mpf(0)
    with mpmath.workprec(64):
        for x in _sample_points(grid):
            value = f.eval(x)
            upper = max(upper, value)
            if all(abs(x - z) > guard for z in zeros):
                lower = min(lower, value)
    bounded_below = float(lower) if 0 < lower < mpmath.inf else None
    bounded_above = float(upper) if upper < mpmath.inf else None
    logger.debug("empirical bounds for '%s': [%s, %s]", f.label, bounded_below, bounded_above)
    return replace(
        f,
        bounded_below=bounded_below,
        bounded_above=bounded_above,
        bounds_empirical=True,
    )
