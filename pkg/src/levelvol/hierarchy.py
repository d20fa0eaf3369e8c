"""Driver for the eigenvalue hierarchy of volume upper bounds.

For a nonnegative homogeneous polynomial g of even degree t and the box
B = [-r, r]^n, the scalar

    tau_d = lambda_min( M_d(#lambda), M*_d )

(pencil of the pushforward moment matrix against the model Hankel matrix
with entries n/(n + (k+l-2)t)) decreases monotonically in d and converges
to vol({g <= 1}) / (2r)^n from above.  The driver walks d upward, reusing
the moment expansion so each pushforward moment is computed exactly once,
and reports per-degree diagnostics instead of raising on numerical
degradation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from ._linalg import NotPositiveDefinite
from .eig import JacobiConvergenceError, gen_eig_min
from .hankel import (
    SymMatrix,
    apply_congruence,
    chebyshev_congruence,
    model_matrix,
    moment_matrix,
    orthonormal_congruence,
)
from .moments import BoxSpec, MomentExtender, MomentSequence
from .oracle import polynomial_arrays
from .poly import Polynomial

_MONOTONE_SLACK = 1e-9


@dataclass(frozen=True)
class DegreeRecord:
    """One rung of the hierarchy; ``error`` is set when tau is unavailable."""

    d: int
    tau: float | None
    scaled: float | None
    residual: float | None
    condition_estimate: float | None
    reliable: bool
    error: str | None = None


@dataclass
class ConvergenceReport:
    n: int
    t: int
    radius: Fraction
    basis: str
    records: list[DegreeRecord] = field(default_factory=list)
    final_estimate: float | None = None
    monotone: bool = True
    warnings: list[str] = field(default_factory=list)

    def scaled_estimates(self) -> list[float]:
        """Scaled upper bounds (2r)^n tau_d for the computed degrees, in order."""
        return [rec.scaled for rec in self.records if rec.scaled is not None]


def integral_discriminant(vol: float, n: int, t: int) -> float:
    """Gamma(1 + (n+t)/2) * vol, via log-gamma to dodge overflow."""
    if vol < 0:
        raise ValueError("volume must be nonnegative")
    if vol == 0.0:
        return 0.0
    return math.exp(math.lgamma(1.0 + (n + t) / 2.0) + math.log(vol))


def run_hierarchy(
    g: Polynomial,
    box: BoxSpec,
    d_max: int,
    basis: str = "monomial",
    *,
    plateau_tol: float | None = 1e-4,
    checks: bool = True,
    check_samples: int = 10_000,
    seed: int = 2024,
    moment_source: MomentExtender | None = None,
) -> ConvergenceReport:
    """Compute tau_1 .. tau_{d_max} with diagnostics.

    Stops early when the eigensolver reports a definiteness failure (the
    remaining degrees are marked unavailable) or, if ``plateau_tol`` is not
    None, after the relative step |tau_d - tau_{d-1}| / tau_d stays below
    the tolerance for two consecutive degrees.
    """
    if g.dimension != box.dimension:
        raise ValueError("polynomial and box dimensions differ")
    if d_max < 1:
        raise ValueError("d_max must be at least 1")
    t = g.homogeneity_degree()
    if t is None:
        raise ValueError("the hierarchy requires a homogeneous polynomial")
    if t % 2:
        raise ValueError("the hierarchy requires even degree (odd forms change sign)")

    report = ConvergenceReport(n=box.dimension, t=t, radius=box.radius, basis=basis)
    if checks:
        report.warnings.extend(_input_warnings(g, box, check_samples, seed))

    extender = moment_source if moment_source is not None else MomentExtender(g, box)
    scale = float(box.volume)
    plateau_run = 0
    prev_tau: float | None = None
    stop_reason: str | None = None

    for d in range(1, d_max + 1):
        if stop_reason is not None:
            report.records.append(
                DegreeRecord(d, None, None, None, None, False, error=stop_reason)
            )
            continue
        values = extender.extend_to(2 * d)
        seq = MomentSequence(box=box, map_degree=t, values=tuple(values))
        A = moment_matrix(seq, d)
        B = model_matrix(box.dimension, t, d)
        try:
            A, B = _to_basis(A, B, basis, d)
            result = gen_eig_min(A, B)
        except NotPositiveDefinite as exc:
            report.records.append(
                DegreeRecord(d, None, None, None, None, False, error=str(exc))
            )
            stop_reason = "unavailable (stopped after definiteness failure)"
            continue
        except JacobiConvergenceError as exc:
            report.records.append(
                DegreeRecord(d, None, None, None, None, False, error=str(exc))
            )
            continue
        report.records.append(
            DegreeRecord(
                d=d,
                tau=result.tau,
                scaled=scale * result.tau,
                residual=result.residual,
                condition_estimate=result.condition_estimate,
                reliable=result.reliable,
            )
        )
        if plateau_tol is not None and prev_tau is not None and result.tau > 0:
            if abs(result.tau - prev_tau) / abs(result.tau) < plateau_tol:
                plateau_run += 1
            else:
                plateau_run = 0
            if plateau_run >= 2:
                stop_reason = "skipped (converged to plateau)"
        prev_tau = result.tau

    _audit(report)
    return report


def _to_basis(A: SymMatrix, B: SymMatrix, basis: str, d: int):
    if basis == "monomial":
        return A, B
    if basis == "chebyshev":
        C = chebyshev_congruence(d)
        interval = (Fraction(0), Fraction(1))
        return (
            apply_congruence(A, C, "chebyshev", interval),
            apply_congruence(B, C, "chebyshev", interval),
        )
    if basis == "orthonormal-model":
        C = orthonormal_congruence(B)
    elif basis == "orthonormal-pushforward":
        C = orthonormal_congruence(A)
    else:
        raise ValueError(f"unknown basis {basis!r}")
    return apply_congruence(A, C, basis), apply_congruence(B, C, basis)


def _audit(report: ConvergenceReport) -> None:
    reliable = [rec for rec in report.records if rec.reliable and rec.tau is not None]
    monotone = True
    for prev, cur in zip(reliable, reliable[1:]):
        if cur.tau > prev.tau * (1.0 + _MONOTONE_SLACK):
            monotone = False
            break
    report.monotone = monotone
    report.final_estimate = reliable[-1].scaled if reliable else None


def _input_warnings(g: Polynomial, box: BoxSpec, samples: int, seed: int) -> list[str]:
    """Cheap sampling checks: nonnegativity of g and containment of {g < 1}."""
    warnings: list[str] = []
    if samples <= 0:
        return warnings
    exps, coeffs = polynomial_arrays(g)
    n = box.dimension
    r = float(box.radius)

    x = kernels.sample_uniform(seed, 0, samples, n, -r, r)
    values = _eval_float(x, exps, coeffs)
    if values.min() < 0.0:
        warnings.append(
            "sampled a negative value of the polynomial inside the box; "
            "the hierarchy assumes a nonnegative integrand"
        )

    # Push samples onto the box faces; interior points of {g < 1} there mean
    # the sub-level set is not contained in the open box.
    face = kernels.sample_uniform(seed + 1, 0, samples, n + 1, 0.0, 1.0)
    coords = -r + 2.0 * r * face[:, :n]
    selector = np.minimum((face[:, n] * 2 * n).astype(np.int64), 2 * n - 1)
    axis = selector // 2
    sign = np.where(selector % 2 == 0, 1.0, -1.0)
    coords[np.arange(samples), axis] = sign * r
    face_values = _eval_float(coords, exps, coeffs)
    if face_values.min() < 1.0:
        warnings.append(
            "the sampling box boundary meets the open sub-level set; "
            "the computed bound then refers to the truncated set"
        )
    return warnings


def _eval_float(x: np.ndarray, exps: np.ndarray, coeffs: np.ndarray) -> np.ndarray:
    values = np.zeros(x.shape[0])
    for t in range(coeffs.size):
        term = np.full(x.shape[0], coeffs[t])
        for j in range(x.shape[1]):
            e = exps[t, j]
            if e:
                term = term * x[:, j] ** e
        values += term
    return values
