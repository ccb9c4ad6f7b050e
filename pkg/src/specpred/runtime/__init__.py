"""Expression evaluation: AST to SpectralDensity."""

from specpred.runtime.builder import CONSTRUCTORS, DensityBuilder, build_density

__all__ = ["CONSTRUCTORS", "DensityBuilder", "build_density"]
