"""Spectral densities: the catalog of named densities and their algebra."""

from specpred.spectra.algebra import (
    algebraic_power_factor,
    merge_singularities,
    power,
    product,
    quotient,
    scale,
    shift,
    trig_power_factor,
)
from specpred.spectra.angles import Angle, reduce_angle
from specpred.spectra.catalog import (
    PollaczekParams,
    ar1,
    companion_hat,
    companion_hat1,
    companion_hat2,
    constant,
    ma1,
    pollaczek,
    pollaczek_companion_ratio,
    white_noise,
)
from specpred.spectra.density import (
    Singularity,
    SingularityKind,
    SpectralDensity,
    essential_zero,
    from_callable,
    kink,
    power_point,
    verify_symmetry,
    with_empirical_bounds,
)
from specpred.spectra.polynomials import AlgebraicPolynomial, Root, TrigPolynomial

__all__ = [
    "AlgebraicPolynomial",
    "Angle",
    "PollaczekParams",
    "Root",
    "Singularity",
    "SingularityKind",
    "SpectralDensity",
    "TrigPolynomial",
    "algebraic_power_factor",
    "ar1",
    "companion_hat",
    "companion_hat1",
    "companion_hat2",
    "constant",
    "essential_zero",
    "from_callable",
    "kink",
    "ma1",
    "merge_singularities",
    "pollaczek",
    "pollaczek_companion_ratio",
    "power",
    "power_point",
    "product",
    "quotient",
    "reduce_angle",
    "scale",
    "shift",
    "trig_power_factor",
    "verify_symmetry",
    "white_noise",
]
