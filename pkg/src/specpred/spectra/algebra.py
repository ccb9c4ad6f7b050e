"""Closure of densities under product, scalar multiple, shift, power and quotient.

Annotations at a shared location are merged so that the result still knows
what happens there: an essential zero absorbs any power or kink, power orders
add, and a zero meeting a pole of the same order becomes a removable point
whose limit is estimated from both sides.
"""

from __future__ import annotations

import logging
import math
from collections.abc import Iterable
from dataclasses import replace
from typing import Optional

import mpmath

from specpred.errors import InvalidConstructionError, InvalidParameterError, PreconditionError
from specpred.spectra.angles import Angle, AngleLike, reduce_angle
from specpred.spectra.density import (
    LogEvaluator,
    Singularity,
    SingularityKind,
    SpectralDensity,
    kink,
    power_point,
    verify_symmetry,
)
from specpred.spectra.polynomials import AlgebraicPolynomial, Root, TrigPolynomial, log_abs

logger = logging.getLogger(__name__)

# Distances at which a removable limit is sampled; the spread across them must be small.
_LIMIT_OFFSETS = ("1e-4", "1e-6", "1e-8", "1e-10")
_LIMIT_SPREAD = 1e-3
# Radius around a filled common zero inside which f_hat/f is replaced by its limit.
QUOTIENT_GUARD_BAND = 1e-3

Kind = SingularityKind


def _estimate_log_limit(log_fn: LogEvaluator, location: Angle) -> Optional[mpmath.mpf]:
    """Two-sided estimate of lim log f at ``location``; None when it does not settle."""
    with mpmath.workprec(192):
        center = location.value()
        estimates = []
        for offset in _LIMIT_OFFSETS:
            delta = mpmath.mpf(offset)
            left = log_fn(reduce_angle(center - delta))
            right = log_fn(reduce_angle(center + delta))
            if not (mpmath.isfinite(left) and mpmath.isfinite(right)):
                return None
            estimates.append((left + right) / 2)
        steps = [abs(b - a) for a, b in zip(estimates, estimates[1:])]
        if steps[-1] > _LIMIT_SPREAD:
            return None
        return estimates[-1]


def _removable(location: Angle, log_fn: LogEvaluator, smooth: bool) -> Singularity:
    log_limit = _estimate_log_limit(log_fn, location)
    if log_limit is None:
        raise InvalidConstructionError(f"No finite positive limit at {location}")
    return Singularity(
        location, Kind.REMOVABLE, smooth=smooth, limit=float(mpmath.exp(log_limit))
    )


def _combine(a: Singularity, b: Singularity, log_fn: LogEvaluator) -> Singularity:
    """Merge two annotations at one location for a product density."""
    location = a.location
    kinds = {a.kind, b.kind}
    if Kind.UNKNOWN in kinds:
        other = b if a.kind is Kind.UNKNOWN else a
        if other.is_pole:
            raise InvalidConstructionError(
                f"Cannot resolve 0 * inf at {location}: the zero has no local annotation"
            )
        if other.kind is Kind.ESSENTIAL:
            return other
        return Singularity(location, Kind.UNKNOWN)
    if Kind.ESSENTIAL in kinds:
        return Singularity(location, Kind.ESSENTIAL, smooth=True)
    if a.kind is Kind.POWER and b.kind is Kind.POWER:
        order = a.order + b.order
        smooth = a.smooth and b.smooth
        if order == 0:
            return _removable(location, log_fn, smooth)
        return power_point(location, order, smooth)
    if Kind.POWER in kinds:
        power = a if a.kind is Kind.POWER else b
        other = b if power is a else a
        return replace(power, smooth=power.smooth and other.smooth)
    if Kind.KINK in kinds:
        return kink(location)
    limit = a.limit * b.limit if a.limit is not None and b.limit is not None else None
    return Singularity(location, Kind.REMOVABLE, smooth=a.smooth and b.smooth, limit=limit)


def merge_singularities(
    first: Iterable[Singularity], second: Iterable[Singularity], log_fn: LogEvaluator
) -> tuple[Singularity, ...]:
    """Union of two annotation lists for the product density with log ``log_fn``."""
    merged = list(first)
    for incoming in second:
        for index, existing in enumerate(merged):
            if existing.location.same_point(incoming.location):
                merged[index] = _combine(existing, incoming, log_fn)
                break
        else:
            merged.append(incoming)
    return tuple(merged)


def _optional_product(x: Optional[float], y: Optional[float]) -> Optional[float]:
    return x * y if x is not None and y is not None else None


def product(f: SpectralDensity, g: SpectralDensity) -> SpectralDensity:
    """Pointwise product f*g.

    Raises:
        InvalidConstructionError: A pole of one factor meets an unannotated zero of the other.
    """
    f_log, g_log = f.log_fn, g.log_fn

    def log_fn(x: mpmath.mpf) -> mpmath.mpf:
        return f_log(x) + g_log(x)

    return SpectralDensity(
        log_fn=log_fn,
        singularities=merge_singularities(f.singularities, g.singularities, log_fn),
        symmetric=f.symmetric and g.symmetric,
        bounded_above=_optional_product(f.bounded_above, g.bounded_above),
        bounded_below=_optional_product(f.bounded_below, g.bounded_below),
        bounds_empirical=f.bounds_empirical or g.bounds_empirical,
        label=f"{_wrap(f)} * {_wrap(g)}",
    )


def scale(f: SpectralDensity, c: float) -> SpectralDensity:
    """The scalar multiple c*f, c > 0."""
    if not c > 0 or math.isinf(c):
        raise InvalidParameterError(f"Scale factor must be positive and finite, got {c}")
    f_log = f.log_fn

    def log_fn(x: mpmath.mpf) -> mpmath.mpf:
        return mpmath.log(c) + f_log(x)

    singularities = tuple(
        replace(s, limit=s.limit * c) if s.limit is not None else s for s in f.singularities
    )
    return SpectralDensity(
        log_fn=log_fn,
        singularities=singularities,
        symmetric=f.symmetric,
        bounded_above=f.bounded_above * c if f.bounded_above is not None else None,
        bounded_below=f.bounded_below * c if f.bounded_below is not None else None,
        bounds_empirical=f.bounds_empirical,
        label=f"{c:g} * {_wrap(f)}",
    )


def shift(f: SpectralDensity, by: AngleLike) -> SpectralDensity:
    """The translate x -> f(x - by), arguments reduced modulo 2*pi.

    The symmetric flag is cleared unless the shift is trivial; use
    ``verify_symmetry`` to re-establish it.
    """
    offset = Angle.of(by)
    if offset.is_zero():
        return f.relabeled(f"shift({f.label}, 0)")
    f_log = f.log_fn

    def log_fn(x: mpmath.mpf) -> mpmath.mpf:
        return f_log(reduce_angle(x - offset.value()))

    return SpectralDensity(
        log_fn=log_fn,
        singularities=tuple(s.moved(s.location + offset) for s in f.singularities),
        symmetric=False,
        bounded_above=f.bounded_above,
        bounded_below=f.bounded_below,
        bounds_empirical=f.bounds_empirical,
        label=f"shift({f.label}, {offset})",
    )


def _power_annotation(s: Singularity, alpha: float) -> Singularity:
    integer_power = alpha >= 0 and float(alpha).is_integer()
    if s.kind is Kind.POWER:
        return power_point(s.location, s.order * alpha, smooth=s.smooth and integer_power)
    if s.kind in (Kind.ESSENTIAL, Kind.UNKNOWN) and alpha < 0:
        raise InvalidConstructionError(
            f"A {s.kind.value} zero at {s.location} raised to {alpha:g} is not integrable"
        )
    if s.kind is Kind.REMOVABLE and s.limit is not None:
        return replace(s, limit=s.limit**alpha)
    return s


def power(f: SpectralDensity, alpha: float) -> SpectralDensity:
    """f**alpha; a zeroth power gives the constant 1."""
    if not math.isfinite(alpha):
        raise InvalidParameterError(f"Exponent must be finite, got {alpha}")
    f_log = f.log_fn
    if alpha == 0:
        return SpectralDensity(
            log_fn=lambda _x: mpmath.mpf(0),
            symmetric=True,
            bounded_above=1.0,
            bounded_below=1.0,
            label=f"{_wrap(f)}^0",
        )

    def log_fn(x: mpmath.mpf) -> mpmath.mpf:
        return alpha * f_log(x)

    lower, upper = f.bounded_below, f.bounded_above
    if alpha < 0:
        lower, upper = upper, lower
    return SpectralDensity(
        log_fn=log_fn,
        singularities=tuple(_power_annotation(s, alpha) for s in f.singularities),
        symmetric=f.symmetric,
        bounded_above=upper**alpha if upper is not None else None,
        bounded_below=lower**alpha if lower is not None else None,
        bounds_empirical=f.bounds_empirical,
        label=f"{_wrap(f)}^{alpha:g}",
    )


def quotient(
    f_hat: SpectralDensity, f: SpectralDensity, guard: float = QUOTIENT_GUARD_BAND
) -> SpectralDensity:
    """h = f_hat/f in log space.

    Shared essential zeros become removable points when the limit of the ratio
    exists and is positive; within ``guard`` of such a point the limit is used
    in place of the cancelling difference of logarithms.

    Raises:
        PreconditionError: f vanishes where f_hat does not, or a shared zero
            has no positive limit.
    """
    num_log, den_log = f_hat.log_fn, f.log_fn

    def raw_log(x: mpmath.mpf) -> mpmath.mpf:
        return num_log(x) - den_log(x)

    singularities = list(f_hat.singularities)
    filled: list[tuple[Angle, float]] = []
    for below in f.singularities:
        match = next(
            (i for i, s in enumerate(singularities) if s.location.same_point(below.location)),
            None,
        )
        above = singularities[match] if match is not None else None
        if below.kind is Kind.UNKNOWN:
            raise PreconditionError(f"'{f.label}' has an unannotated zero at {below.location}")
        if below.kind is Kind.ESSENTIAL:
            if above is None or above.kind is not Kind.ESSENTIAL:
                raise PreconditionError(
                    f"'{f.label}' has an essential zero at {below.location} "
                    f"that '{f_hat.label}' does not share"
                )
            try:
                removable = _removable(below.location, raw_log, smooth=True)
            except InvalidConstructionError as exc:
                raise PreconditionError(
                    f"The ratio has no finite positive limit at {below.location}"
                ) from exc
            assert removable.limit is not None
            singularities[match] = removable
            filled.append((below.location, math.log(removable.limit)))
            continue
        inverse = below
        if below.kind is Kind.POWER:
            inverse = power_point(below.location, -below.order, below.smooth)
        elif below.limit is not None:
            inverse = replace(below, limit=1 / below.limit)
        if above is None:
            singularities.append(inverse)
        else:
            singularities[match] = _combine(above, inverse, raw_log)

    def log_fn(x: mpmath.mpf) -> mpmath.mpf:
        for location, log_limit in filled:
            if abs(reduce_angle(x - location.value())) < guard:
                return mpmath.mpf(log_limit)
        return raw_log(x)

    lower = (
        f_hat.bounded_below / f.bounded_above
        if f_hat.bounded_below is not None and f.bounded_above is not None
        else None
    )
    upper = (
        f_hat.bounded_above / f.bounded_below
        if f_hat.bounded_above is not None and f.bounded_below is not None
        else None
    )
    return SpectralDensity(
        log_fn=log_fn,
        singularities=tuple(singularities),
        symmetric=f_hat.symmetric and f.symmetric,
        bounded_above=upper,
        bounded_below=lower,
        bounds_empirical=f_hat.bounds_empirical or f.bounds_empirical,
        label=f"{_wrap(f_hat)} / {_wrap(f)}",
    )


def _require_two_sided_bounds(h: SpectralDensity) -> None:
    if h.bounded_below is None or h.bounded_above is None:
        raise InvalidConstructionError(
            f"'{h.label}' must be bounded above and away from zero to carry a singular factor"
        )


def _factor_smooth(alpha: float, multiplicity: int) -> bool:
    # |t|^alpha is C-infinity at a root iff alpha is a nonnegative integer and
    # the sign of t^alpha does not flip there.
    if alpha < 0 or not float(alpha).is_integer():
        return False
    return int(alpha) % 2 == 0 or multiplicity % 2 == 0


def _root_annotations(roots: Iterable[Root], alpha: float) -> list[Singularity]:
    return [
        power_point(
            root.location, alpha * root.multiplicity, _factor_smooth(alpha, root.multiplicity)
        )
        for root in roots
    ]


def _with_factor(
    h: SpectralDensity,
    factor_log: LogEvaluator,
    annotations: list[Singularity],
    symmetric: bool,
    label: str,
) -> SpectralDensity:
    h_log = h.log_fn

    def log_fn(x: mpmath.mpf) -> mpmath.mpf:
        return h_log(x) + factor_log(x)

    g = SpectralDensity(
        log_fn=log_fn,
        singularities=merge_singularities(h.singularities, annotations, log_fn),
        symmetric=symmetric and h.symmetric,
        label=label,
    )
    if h.symmetric and not symmetric:
        g = verify_symmetry(g)
    return g


def trig_power_factor(h: SpectralDensity, t: TrigPolynomial, alpha: float) -> SpectralDensity:
    """g = h |t|^alpha, with the roots of t as zeros (alpha > 0) or poles (alpha < 0).

    Raises:
        InvalidConstructionError: h lacks two-sided bounds, or alpha < 0 and t is
            not flagged nonnegative.
    """
    _require_two_sided_bounds(h)
    label = f"{_wrap(h)} * |{t}|^{alpha:g}"
    if alpha == 0:
        return h.relabeled(label)
    if alpha < 0 and not t.nonnegative:
        raise InvalidConstructionError(
            f"A negative power needs a nonnegative trigonometric polynomial, got {t}"
        )

    roots = t.roots()

    def factor_log(x: mpmath.mpf) -> mpmath.mpf:
        return alpha * log_abs(t, x, roots)

    annotations = _root_annotations(roots, alpha)
    return _with_factor(h, factor_log, annotations, t.is_even or t.is_odd, label)


def algebraic_power_factor(
    h: SpectralDensity, q: AlgebraicPolynomial, alpha: float
) -> SpectralDensity:
    """g = h |q|^alpha on [-pi, pi], extended periodically.

    A nonconstant q makes the periodic extension non-smooth at +-pi, which is
    annotated as a kink unless a root already sits there.
    """
    _require_two_sided_bounds(h)
    label = f"{_wrap(h)} * |{q}|^{alpha:g}"
    if alpha == 0:
        return h.relabeled(label)

    roots = q.roots()

    def factor_log(x: mpmath.mpf) -> mpmath.mpf:
        return alpha * log_abs(q, x, roots)

    annotations = _root_annotations(roots, alpha)
    if q.degree >= 1:
        half_turn = Angle.pi_multiple(1)
        if not any(a.location.same_point(half_turn) for a in annotations):
            annotations.append(kink(half_turn))
    g = _with_factor(h, factor_log, annotations, q.parity != 0, label)
    if q.degree == 0:
        c = abs(q.coefficients[0]) ** alpha
        g = replace(
            g,
            bounded_above=h.bounded_above * c if h.bounded_above is not None else None,
            bounded_below=h.bounded_below * c if h.bounded_below is not None else None,
        )
    logger.debug("built %s with %d annotations", label, len(g.singularities))
    return g


def _wrap(f: SpectralDensity) -> str:
    label = f.label
    return f"({label})" if any(op in label for op in (" * ", " / ", "^")) else label
