"""Toeplitz determinants by Cholesky factorization.

sigma_n^2 = D_{n+1}/D_n, where D_m is the determinant of the m x m Toeplitz
matrix [r(i - j)]. Determinants are handled as logarithms; for a single
factor L of the (n+1) x (n+1) matrix the ratio is simply L[n][n]^2.
"""

from __future__ import annotations

import mpmath

from specpred.errors import PSDViolationError
from specpred.integrate import CovarianceSequence

ORACLE_MAX_ORDER = 64


def _cholesky_pivots(r: CovarianceSequence, size: int) -> list[mpmath.mpf]:
    """Squared diagonal of the Cholesky factor of the size x size Toeplitz matrix."""
    factor: list[list[mpmath.mpc]] = []
    pivots: list[mpmath.mpf] = []
    for i in range(size):
        row: list[mpmath.mpc] = []
        for j in range(i):
            acc = r[i - j] - mpmath.fsum(row[m] * mpmath.conj(factor[j][m]) for m in range(j))
            row.append(acc / factor[j][j])
        pivot = mpmath.re(r[0]) - mpmath.fsum(abs(row[m]) ** 2 for m in range(i))
        if pivot <= 0:
            raise PSDViolationError(
                f"Toeplitz matrix of '{r.label}' is not positive definite: "
                f"leading minor {i + 1} fails",
                minor=i + 1,
            )
        row.append(mpmath.sqrt(pivot))
        factor.append(row)
        pivots.append(pivot)
    return pivots


def log_determinant(r: CovarianceSequence, size: int, precision_bits: int = 0) -> mpmath.mpf:
    """log det of the size x size Toeplitz matrix [r(i - j)].

    Raises:
        PSDViolationError: A leading minor is not positive.
    """
    if size < 1 or size > r.max_lag + 1:
        raise ValueError(f"Matrix size must be in 1..{r.max_lag + 1}, got {size}")
    with mpmath.workprec(precision_bits or r.precision_bits):
        return mpmath.fsum(mpmath.log(p) for p in _cholesky_pivots(r, size))


def determinant_oracle(r: CovarianceSequence, n: int, precision_bits: int = 0) -> mpmath.mpf:
    """sigma_n^2 = D_{n+1}/D_n from one factorization.

    Raises:
        PSDViolationError: A leading minor up to n + 1 is not positive.
    """
    if n < 1 or n > min(ORACLE_MAX_ORDER, r.max_lag):
        raise ValueError(f"Oracle order must be in 1..{min(ORACLE_MAX_ORDER, r.max_lag)}, got {n}")
    with mpmath.workprec(precision_bits or r.precision_bits):
        pivots = _cholesky_pivots(r, n + 1)
        return +pivots[n]
