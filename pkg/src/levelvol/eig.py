"""Symmetric and symmetric-definite generalized eigensolvers.

The pencil of interest pairs two Hilbert-like Hankel matrices whose
generalized eigenvalue spread is moderate even when each matrix alone is
numerically singular in double precision.  ``gen_eig_min`` therefore has
two routes:

* **exact route** (both operands carry exact rational entries): factor the
  left matrix A as L D L^T in exact rational arithmetic, transform B
  exactly, round the reduced matrix once, and read the smallest pencil
  eigenvalue off as 1 / lambda_max of the reduction.  The target eigenvalue
  is then the norm-setting one, so the single rounding costs only a few
  ulps; this is what keeps degree-8 hierarchies on 10-variable problems
  accurate.  Falls back to factoring B when A is exactly singular.

* **float route** (anything without exact entries, e.g. matrices produced
  by a floating orthonormal congruence): classic Cholesky reduction,
  factoring whichever side has the smaller diagonal-ratio proxy.

The dense symmetric eigensolver is a cyclic Jacobi iteration: off-diagonal
convergence threshold 1e-14 * ||A||_F, budget 200 sweeps.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ._linalg import (
    NotPositiveDefinite,
    cholesky_lower,
    solve_lower,
    solve_upper_transposed,
)
from .hankel import ExactRows, SymMatrix

CONDITION_LIMIT = 1e14
_RESIDUAL_LIMIT = 1e-8


class JacobiConvergenceError(RuntimeError):
    """Jacobi sweep budget exhausted before off-diagonal convergence."""


@dataclass(frozen=True)
class GenEigResult:
    """Smallest generalized eigenvalue of a symmetric-definite pencil."""

    tau: float
    residual: float
    condition_estimate: float
    reduction_side: str  # "A" or "B", the factored matrix

    @property
    def ill_conditioned(self) -> bool:
        return self.condition_estimate > CONDITION_LIMIT

    @property
    def reliable(self) -> bool:
        return self.residual <= _RESIDUAL_LIMIT and not self.ill_conditioned


def cholesky(B: SymMatrix | np.ndarray) -> np.ndarray:
    """Lower-triangular L with L L^T = B; NotPositiveDefinite on failure."""
    entries = B.entries if isinstance(B, SymMatrix) else np.asarray(B, dtype=float)
    return cholesky_lower(entries)


def _jacobi(matrix: np.ndarray, max_sweeps: int = 200):
    """Cyclic Jacobi; returns (eigenvalues ascending, eigenvector columns)."""
    a = np.array(matrix, dtype=float)
    m = a.shape[0]
    v = np.eye(m)
    fro = np.linalg.norm(a)
    if m == 1 or fro == 0.0:
        return a.diagonal().copy(), v
    threshold = 1e-14 * fro
    off_mask = ~np.eye(m, dtype=bool)
    for _ in range(max_sweeps):
        off = np.sqrt(np.sum(a[off_mask] ** 2))
        if off <= threshold:
            break
        for p in range(m - 1):
            for q in range(p + 1, m):
                apq = a[p, q]
                if abs(apq) <= threshold / (m * m):
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                rot_p = a[:, p].copy()
                rot_q = a[:, q].copy()
                a[:, p] = c * rot_p - s * rot_q
                a[:, q] = s * rot_p + c * rot_q
                rot_p = a[p, :].copy()
                rot_q = a[q, :].copy()
                a[p, :] = c * rot_p - s * rot_q
                a[q, :] = s * rot_p + c * rot_q
                rot_p = v[:, p].copy()
                rot_q = v[:, q].copy()
                v[:, p] = c * rot_p - s * rot_q
                v[:, q] = s * rot_p + c * rot_q
    else:
        raise JacobiConvergenceError("Jacobi did not converge within 200 sweeps")
    w = a.diagonal().copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def sym_eigen(A: SymMatrix | np.ndarray) -> np.ndarray:
    """Eigenvalues of a symmetric matrix, ascending."""
    entries = A.entries if isinstance(A, SymMatrix) else np.asarray(A, dtype=float)
    w, _ = _jacobi(entries)
    return w


def _ldl_exact(rows: ExactRows):
    """Exact rational B = L D L^T; returns (L, D) or raises with 1-based pivot."""
    m = len(rows)
    L = [[Fraction(0)] * m for _ in range(m)]
    D = [Fraction(0)] * m
    for j in range(m):
        s = rows[j][j] - sum(L[j][k] * L[j][k] * D[k] for k in range(j))
        if s <= 0:
            raise NotPositiveDefinite(j + 1)
        D[j] = s
        L[j][j] = Fraction(1)
        for i in range(j + 1, m):
            L[i][j] = (rows[i][j] - sum(L[i][k] * L[j][k] * D[k] for k in range(j))) / s
    return L, D


def _reduce_exact(factored: ExactRows, other: ExactRows):
    """Float image of Dh^{-1/2} L^{-1} other L^{-T} Dh^{-1/2}, all exact until the end.

    Returns (reduced, L_float, dinv) for eigenvector recovery.
    """
    L, D = _ldl_exact(factored)
    m = len(factored)
    X = [list(row) for row in other]
    for i in range(m):
        for k in range(i):
            if L[i][k]:
                lik = L[i][k]
                Xk = X[k]
                Xi = X[i]
                for j in range(m):
                    Xi[j] -= lik * Xk[j]
    Y = [[X[j][i] for j in range(m)] for i in range(m)]
    for i in range(m):
        for k in range(i):
            if L[i][k]:
                lik = L[i][k]
                Yk = Y[k]
                Yi = Y[i]
                for j in range(m):
                    Yi[j] -= lik * Yk[j]
    dinv = np.array([float(x) for x in D]) ** -0.5
    reduced = np.array(
        [[float(Y[j][i]) * dinv[i] * dinv[j] for j in range(m)] for i in range(m)]
    )
    reduced = (reduced + reduced.T) / 2.0
    L_float = np.array([[float(v) for v in row] for row in L])
    return reduced, L_float, dinv


def _diag_ratio(entries: np.ndarray) -> float:
    d = entries.diagonal()
    if d.min() <= 0.0:
        return np.inf
    return float(d.max() / d.min())


def gen_eig_min(A: SymMatrix, B: SymMatrix) -> GenEigResult:
    """Largest tau with A - tau*B PSD, for a symmetric-definite pencil.

    Equals the minimum eigenvalue of L^{-1} A L^{-T} with B = L L^T.
    Raises NotPositiveDefinite when neither side admits a factorization.
    """
    if A.size != B.size:
        raise ValueError("pencil matrices must have equal size")
    if A.basis != B.basis:
        raise ValueError(f"pencil basis tags differ: {A.basis!r} vs {B.basis!r}")
    if A.exact is not None and B.exact is not None:
        return _gen_eig_exact(A, B)
    return _gen_eig_float(A, B)


def _gen_eig_exact(A: SymMatrix, B: SymMatrix) -> GenEigResult:
    try:
        reduced, L_float, dinv = _reduce_exact(A.exact, B.exact)
        side = "A"
    except NotPositiveDefinite:
        reduced, L_float, dinv = _reduce_exact(B.exact, A.exact)
        side = "B"
    w, vecs = _jacobi(reduced)
    if side == "A":
        mu = w[-1]
        if mu <= 0.0:
            raise NotPositiveDefinite(1, "right-hand matrix is not positive definite")
        tau = 1.0 / mu
        y = vecs[:, -1]
    else:
        tau = w[0]
        y = vecs[:, 0]
    v = solve_upper_transposed(L_float, dinv * y)
    return _finish(A, B, tau, v, side, w)


def _gen_eig_float(A: SymMatrix, B: SymMatrix) -> GenEigResult:
    prefer_b = _diag_ratio(B.entries) <= _diag_ratio(A.entries)
    order = ("B", "A") if prefer_b else ("A", "B")
    L = None
    for side in order:
        target = B if side == "B" else A
        try:
            L = cholesky_lower(target.entries)
            break
        except NotPositiveDefinite as exc:
            failure = exc
    else:
        raise failure
    other = A if side == "B" else B
    half = solve_lower(L, other.entries)
    reduced = solve_lower(L, half.T)
    reduced = (reduced + reduced.T) / 2.0
    w, vecs = _jacobi(reduced)
    if side == "B":
        tau = w[0]
        y = vecs[:, 0]
    else:
        mu = w[-1]
        if mu <= 0.0:
            raise NotPositiveDefinite(1, "right-hand matrix is not positive definite")
        tau = 1.0 / mu
        y = vecs[:, -1]
    v = solve_upper_transposed(L, y)
    return _finish(A, B, tau, v, side, w)


def _finish(
    A: SymMatrix, B: SymMatrix, tau: float, v: np.ndarray, side: str,
    reduced_eigs: np.ndarray,
) -> GenEigResult:
    norm_v = np.linalg.norm(v)
    if norm_v > 0:
        v = v / norm_v
    fro = np.linalg.norm(A.entries)
    residual = float(np.linalg.norm(A.entries @ v - tau * (B.entries @ v)) / fro)
    # Conditioning of the reduced symmetric problem: its eigenvalue spread,
    # which is also the spread of the original pencil (congruence invariant).
    magnitudes = np.abs(reduced_eigs)
    smallest = magnitudes.min()
    condition = float("inf") if smallest == 0.0 else float(magnitudes.max() / smallest)
    return GenEigResult(
        tau=float(tau),
        residual=residual,
        condition_estimate=condition,
        reduction_side=side,
    )
