"""Small dense linear-algebra helpers shared by hankel and eig.

Matrices here are plain float64 numpy arrays, at most a few dozen rows, so
everything is written as straightforward loops.
"""

from __future__ import annotations

import numpy as np


class NotPositiveDefinite(ArithmeticError):
    """Cholesky/LDL pivot failure; ``pivot`` is the 1-based failing index."""

    def __init__(self, pivot: int, message: str | None = None):
        super().__init__(message or f"matrix is not positive definite (pivot {pivot})")
        self.pivot = pivot


def cholesky_lower(matrix: np.ndarray) -> np.ndarray:
    """Lower-triangular L with L L^T = matrix, or NotPositiveDefinite."""
    a = np.asarray(matrix, dtype=float)
    m = a.shape[0]
    L = np.zeros_like(a)
    for j in range(m):
        s = a[j, j] - np.dot(L[j, :j], L[j, :j])
        if not (s > 0.0) or not np.isfinite(s):
            raise NotPositiveDefinite(j + 1)
        L[j, j] = np.sqrt(s)
        for i in range(j + 1, m):
            L[i, j] = (a[i, j] - np.dot(L[i, :j], L[j, :j])) / L[j, j]
    return L


def solve_lower(L: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Forward substitution L x = rhs (rhs may be a matrix)."""
    m = L.shape[0]
    x = np.array(rhs, dtype=float)
    for i in range(m):
        if i:
            x[i] -= L[i, :i] @ x[:i]
        x[i] /= L[i, i]
    return x


def solve_upper_transposed(L: np.ndarray, rhs: np.ndarray) -> np.ndarray:
    """Back substitution L^T x = rhs for lower-triangular L."""
    m = L.shape[0]
    x = np.array(rhs, dtype=float)
    for i in range(m - 1, -1, -1):
        if i < m - 1:
            x[i] -= L[i + 1:, i] @ x[i + 1:]
        x[i] /= L[i, i]
    return x


def invert_lower(L: np.ndarray) -> np.ndarray:
    """Inverse of a lower-triangular matrix, itself lower-triangular."""
    return solve_lower(L, np.eye(L.shape[0]))
