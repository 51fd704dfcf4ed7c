"""Dense linear solves used by the stationary solvers."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NonZeroCurrentSum, SingularMatrix

PIVOT_RTOL = 1e-11


@dataclass(frozen=True)
class LinearSystem:
    matrix: np.ndarray
    rhs: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.asarray(self.matrix))
        b = np.asarray(self.rhs).reshape(-1)
        if A.shape[0] != b.shape[0]:
            raise DimensionMismatch(f"matrix {A.shape} does not match rhs {b.shape}")
        object.__setattr__(self, "matrix", A)
        object.__setattr__(self, "rhs", b)


def lu_solve(sys: LinearSystem) -> np.ndarray:
    """Gaussian elimination with partial pivoting.

    Raises SingularMatrix when a pivot falls below ``PIVOT_RTOL`` times the
    largest entry of the matrix.
    """
    A = sys.matrix.astype(complex if np.iscomplexobj(sys.matrix) or np.iscomplexobj(sys.rhs) else float)
    b = sys.rhs.astype(A.dtype)
    n = A.shape[0]
    if A.shape != (n, n):
        raise DimensionMismatch(f"lu_solve needs a square matrix, got {A.shape}")
    if n == 0:
        return b.copy()
    A = A.copy()
    b = b.copy()
    scale = np.abs(A).max()
    if scale == 0:
        raise SingularMatrix("zero matrix")
    for k in range(n):
        p = k + int(np.argmax(np.abs(A[k:, k])))
        if abs(A[p, k]) <= PIVOT_RTOL * scale:
            raise SingularMatrix(f"pivot {abs(A[p, k]):.3e} at column {k}")
        if p != k:
            A[[k, p]] = A[[p, k]]
            b[[k, p]] = b[[p, k]]
        factors = A[k + 1 :, k] / A[k, k]
        A[k + 1 :, k:] -= np.outer(factors, A[k, k:])
        b[k + 1 :] -= factors * b[k]
    x = np.empty_like(b)
    for k in range(n - 1, -1, -1):
        x[k] = (b[k] - A[k, k + 1 :] @ x[k + 1 :]) / A[k, k]
    return x


def least_squares_solve(sys: LinearSystem) -> tuple[np.ndarray, float]:
    """Minimum-norm least-squares solution and the residual 2-norm."""
    x, *_ = np.linalg.lstsq(sys.matrix, sys.rhs, rcond=None)
    return x, float(np.linalg.norm(sys.matrix @ x - sys.rhs))


def grounded_solve(L: np.ndarray, I: np.ndarray, ground: int = 1, atol: float = 0.0) -> np.ndarray:
    """Solve ``L phi = I`` for node potentials with ``phi[ground] = 0``.

    ``ground`` is a 1-based vertex id. The injected currents must sum to zero:
    ``|sum(I)| <= 1e-12 * ||I|| + atol``.
    """
    L = np.asarray(L)
    I = np.asarray(I)
    n = L.shape[0]
    total = abs(I.sum())
    if total > 1e-12 * np.linalg.norm(I) + atol:
        raise NonZeroCurrentSum(f"injected currents sum to {total:.3e}")
    keep = [i for i in range(n) if i != ground - 1]
    phi = np.zeros(n, dtype=np.result_type(L, I, float))
    if keep:
        phi[keep] = lu_solve(LinearSystem(L[np.ix_(keep, keep)], I[keep]))
    return phi
