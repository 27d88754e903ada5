"""Dense LU factorization with partial pivoting.

The system matrices of the implicit scheme are dense (the fractional stencil
couples every node), but constant in time, so the factorization is computed
once per run and reused for every step.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_triangular

from .errors import ShapeError, SingularMatrixError

PIVOT_RTOL = 1e-14


@dataclass(frozen=True)
class LUFactors:
    """Packed factors of P A = L U.

    ``lu`` stores U on and above the diagonal and the multipliers of the unit
    lower-triangular L below it.  ``perm[i]`` is the row of A that ended up in
    row i, so ``A[perm] == L @ U``.
    """

    lu: np.ndarray
    perm: np.ndarray

    @property
    def n(self) -> int:
        return self.lu.shape[0]

    @property
    def L(self) -> np.ndarray:
        return np.tril(self.lu, -1) + np.eye(self.n)

    @property
    def U(self) -> np.ndarray:
        return np.triu(self.lu)


def lu_factor(A) -> LUFactors:
    a = np.array(A, dtype=float, copy=True)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise ShapeError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix has non-finite entries")
    n = a.shape[0]
    perm = np.arange(n)
    tol = PIVOT_RTOL * np.max(np.abs(a))
    for k in range(n):
        p = k + int(np.argmax(np.abs(a[k:, k])))
        if abs(a[p, k]) <= tol:
            raise SingularMatrixError(f"pivot {a[p, k]!r} in column {k} below threshold {tol!r}")
        if p != k:
            a[[k, p]] = a[[p, k]]
            perm[[k, p]] = perm[[p, k]]
        a[k + 1 :, k] /= a[k, k]
        a[k + 1 :, k + 1 :] -= np.outer(a[k + 1 :, k], a[k, k + 1 :])
    a.setflags(write=False)
    perm.setflags(write=False)
    return LUFactors(a, perm)


def lu_solve(factors: LUFactors, b) -> np.ndarray:
    b = np.asarray(b, dtype=float)
    if b.shape[0] != factors.n:
        raise ShapeError(f"rhs has length {b.shape[0]}, matrix is {factors.n} x {factors.n}")
    y = solve_triangular(factors.lu, b[factors.perm], lower=True, unit_diagonal=True, check_finite=False)
    return solve_triangular(factors.lu, y, lower=False, check_finite=False)
