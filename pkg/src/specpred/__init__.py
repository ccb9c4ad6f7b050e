"""specpred: finite one-step prediction errors of stationary sequences from spectral densities."""

__version__ = "0.1.0"
