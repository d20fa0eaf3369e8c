"""Hankel moment, model, and localizing matrices, plus basis congruences.

Matrices are assembled entry-wise from exact rationals and rounded to
float64 once, at the end; the exact entries ride along on the ``SymMatrix``
so that downstream consumers (the generalized eigensolver in particular)
can keep computing exactly and defer rounding further.  This matters: these
are Hilbert-like matrices whose double-precision images lose all small
eigenvalues well before degree 8.

Supported basis tags: ``monomial`` (assembly basis), ``chebyshev`` (shifted
Chebyshev on a given interval, default [0, 1]), ``orthonormal-model`` and
``orthonormal-pushforward`` (Cholesky-orthonormalized against the model or
pushforward moment matrix).  Congruence transforms never change the
generalized eigenvalues of a pencil, so the basis choice is purely a
numerical-conditioning decision.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from ._linalg import NotPositiveDefinite, cholesky_lower, invert_lower
from .moments import MomentSequence, model_moment

BASIS_KINDS = (
    "monomial",
    "chebyshev",
    "orthonormal-model",
    "orthonormal-pushforward",
)

ExactRows = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True, eq=False)
class SymMatrix:
    """Dense symmetric float matrix, optionally backed by exact rationals."""

    entries: np.ndarray
    basis: str = "monomial"
    exact: ExactRows | None = None
    interval: tuple[Fraction, Fraction] | None = None

    def __post_init__(self):
        e = self.entries
        if e.ndim != 2 or e.shape[0] != e.shape[1]:
            raise ValueError("entries must be a square matrix")
        if not np.array_equal(e, e.T):
            raise ValueError("entries must be exactly symmetric")
        if self.basis not in BASIS_KINDS:
            raise ValueError(f"unknown basis {self.basis!r}")

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    @classmethod
    def from_exact(
        cls,
        rows: Sequence[Sequence[Fraction]],
        basis: str = "monomial",
        interval: tuple[Fraction, Fraction] | None = None,
    ) -> "SymMatrix":
        exact = tuple(tuple(Fraction(v) for v in row) for row in rows)
        entries = np.array([[float(v) for v in row] for row in exact])
        return cls(entries=entries, basis=basis, exact=exact, interval=interval)

    @classmethod
    def from_rows(cls, rows, basis: str = "monomial") -> "SymMatrix":
        return cls(entries=np.array(rows, dtype=float), basis=basis)


def moment_matrix(seq: MomentSequence, d: int) -> SymMatrix:
    """Hankel matrix with entry (k, l) = #lambda_{k+l-2}, k, l = 1..d+1."""
    if seq.order < 2 * d:
        raise ValueError(
            f"need moments through order {2 * d}, sequence holds {seq.order}"
        )
    rows = [[seq.values[k + l] for l in range(d + 1)] for k in range(d + 1)]
    return SymMatrix.from_exact(rows)


def model_matrix(n: int, t: int, d: int) -> SymMatrix:
    """Hankel matrix with entry (k, l) = n/(n + (k+l-2) t); positive definite."""
    rows = [[model_moment(n, t, k + l) for l in range(d + 1)] for k in range(d + 1)]
    return SymMatrix.from_exact(rows)


def localizing_matrix_unit_interval(
    values: Sequence[Fraction], d: int
) -> SymMatrix:
    """Localizing matrix for p(x) = x(1-x): entry (k, l) = phi_{k+l-1} - phi_{k+l}.

    PSD at every order exactly when the sequence is consistent with a
    measure supported in [0, 1].  Needs moments through order 2d + 2.
    """
    if len(values) < 2 * d + 3:
        raise ValueError(
            f"need moments through order {2 * d + 2}, got {len(values) - 1}"
        )
    rows = [
        [Fraction(values[k + l + 1]) - Fraction(values[k + l + 2]) for l in range(d + 1)]
        for k in range(d + 1)
    ]
    return SymMatrix.from_exact(rows)


@dataclass(frozen=True)
class Congruence:
    """Lower-triangular change of basis C; pencils map as (CAC^T, CBC^T)."""

    matrix: np.ndarray
    exact: ExactRows | None = None

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


def chebyshev_congruence(
    d: int, interval: tuple[Fraction, Fraction] = (Fraction(0), Fraction(1))
) -> Congruence:
    """Rows are monomial coefficients of Chebyshev polynomials shifted to interval.

    Row k holds T_k(2(x - lo)/(hi - lo) - 1).  Exact, lower-triangular.
    """
    lo, hi = Fraction(interval[0]), Fraction(interval[1])
    if not lo < hi:
        raise ValueError("degenerate interval")
    # u = s*x + c maps [lo, hi] onto [-1, 1]
    s = Fraction(2) / (hi - lo)
    c = -(lo + hi) / (hi - lo)
    rows: list[list[Fraction]] = [[Fraction(1)] + [Fraction(0)] * d]
    if d >= 1:
        row = [Fraction(0)] * (d + 1)
        row[0], row[1] = c, s
        rows.append(row)
    for k in range(2, d + 1):
        prev, prev2 = rows[k - 1], rows[k - 2]
        row = [Fraction(0)] * (d + 1)
        for i, v in enumerate(prev):
            if v:
                row[i] += 2 * c * v
                row[i + 1] += 2 * s * v
        for i, v in enumerate(prev2):
            row[i] -= v
        rows.append(row)
    exact = tuple(tuple(r) for r in rows)
    matrix = np.array([[float(v) for v in r] for r in rows])
    return Congruence(matrix=matrix, exact=exact)


def orthonormal_congruence(base: SymMatrix) -> Congruence:
    """C = L^{-1} from base = L L^T, so that C base C^T = I.

    Raises NotPositiveDefinite (with the failing pivot) when the float
    Cholesky breaks down; that is the signal to stop a hierarchy or switch
    basis.
    """
    try:
        L = cholesky_lower(base.entries)
    except NotPositiveDefinite as exc:
        raise NotPositiveDefinite(
            exc.pivot, f"cannot orthonormalize: pivot {exc.pivot} not positive"
        ) from exc
    return Congruence(matrix=invert_lower(L), exact=None)


def apply_congruence(matrix: SymMatrix, congruence: Congruence, basis: str,
                     interval: tuple[Fraction, Fraction] | None = None) -> SymMatrix:
    """C M C^T under the new basis tag; exact when both operands are exact."""
    if congruence.size != matrix.size:
        raise ValueError("congruence and matrix sizes differ")
    if congruence.exact is not None and matrix.exact is not None:
        m = matrix.size
        C = congruence.exact
        X = [
            [sum(C[i][k] * matrix.exact[k][j] for k in range(m) if C[i][k]) for j in range(m)]
            for i in range(m)
        ]
        rows = [
            [sum(X[i][k] * C[j][k] for k in range(m) if C[j][k]) for j in range(m)]
            for i in range(m)
        ]
        # symmetrize indices exactly (values already equal)
        return SymMatrix.from_exact(rows, basis=basis, interval=interval)
    raw = congruence.matrix @ matrix.entries @ congruence.matrix.T
    sym = (raw + raw.T) / 2.0
    return SymMatrix(entries=sym, basis=basis, interval=interval)
