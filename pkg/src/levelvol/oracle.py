"""Independent Monte-Carlo verification and closed-form reference volumes.

Sampling uses a counter-based splitmix64 stream indexed by sample number
(see the kernels package), so a given (seed, samples) pair reproduces the
same estimate regardless of chunking or parallel partitioning.  Polynomial
coefficients are rounded to float64 for sampling; this module is a
statistical cross-check, not an exact path.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np

from . import kernels
from .moments import BoxSpec
from .poly import Exponent, Polynomial


class DegenerateEstimateError(RuntimeError):
    """No sample satisfied the restriction; the estimate is meaningless."""


@dataclass(frozen=True)
class McEstimate:
    mean: float
    stderr: float
    samples: int
    seed: int


def polynomial_arrays(p: Polynomial) -> tuple[np.ndarray, np.ndarray]:
    """(exponent matrix, float coefficients) in canonical term order."""
    terms = p.sorted_terms()
    if not terms:
        return np.zeros((0, p.dimension), dtype=np.int64), np.zeros(0)
    exps = np.array([alpha for alpha, _ in terms], dtype=np.int64)
    coeffs = np.array([float(c) for _, c in terms])
    return exps, coeffs


def _stack_parts(parts: Sequence[Polynomial]):
    exps_list, coeffs_list, offsets = [], [], [0]
    for p in parts:
        e, c = polynomial_arrays(p)
        exps_list.append(e)
        coeffs_list.append(c)
        offsets.append(offsets[-1] + len(c))
    n = parts[0].dimension
    exps = (
        np.concatenate(exps_list, axis=0)
        if offsets[-1]
        else np.zeros((0, n), dtype=np.int64)
    )
    coeffs = np.concatenate(coeffs_list) if offsets[-1] else np.zeros(0)
    return exps, coeffs, np.array(offsets, dtype=np.int64)


_MODES = {"sum": 1, "each": 2}


def ball_volume(n: int) -> float:
    """Lebesgue volume pi^(n/2) / Gamma(1 + n/2) of the Euclidean unit ball."""
    if n < 1:
        raise ValueError("dimension must be positive")
    return math.exp(0.5 * n * math.log(math.pi) - math.lgamma(1.0 + 0.5 * n))


def mc_volume(
    g: Polynomial, box: BoxSpec, a: float, b: float, samples: int, seed: int
) -> McEstimate:
    """Estimate vol({x in B : a <= g(x) <= b}) from uniform samples.

    mean = (2r)^n * hit fraction; stderr is the binomial standard error
    scaled the same way.  Deterministic for fixed (seed, samples).
    """
    if samples < 1:
        raise ValueError("need at least one sample")
    if g.dimension != box.dimension:
        raise ValueError("polynomial and box dimensions differ")
    exps, coeffs = polynomial_arrays(g)
    r = float(box.radius)
    hits = kernels.mc_count(seed, 0, samples, -r, r, exps, coeffs, float(a), float(b))
    scale = float(box.volume)
    p_hat = hits / samples
    return McEstimate(
        mean=scale * p_hat,
        stderr=scale * math.sqrt(p_hat * (1.0 - p_hat) / samples),
        samples=samples,
        seed=seed,
    )


def _zstat(parts, box, stat_exps, stat_coeffs, restriction, mode, samples, seed):
    if samples < 1:
        raise ValueError("need at least one sample")
    for p in parts:
        if p.dimension != box.dimension:
            raise ValueError("component dimension differs from box dimension")
    exps, coeffs, offsets = _stack_parts(parts)
    r = float(box.radius)
    if restriction is None:
        mode_code, a, b = 0, 0.0, 0.0
    else:
        mode_code = _MODES[mode]
        a, b = float(restriction[0]), float(restriction[1])
    total, total_sq, accepted = kernels.mc_zstat(
        seed, 0, samples, -r, r, exps, coeffs, offsets,
        stat_exps, stat_coeffs, mode_code, a, b,
    )
    if restriction is not None and accepted == 0:
        raise DegenerateEstimateError(
            "no sample satisfied the restriction; increase samples or widen the band"
        )
    mean = total / samples
    if samples > 1:
        var = max(0.0, (total_sq - total * total / samples) / (samples - 1))
        stderr = math.sqrt(var / samples)
    else:
        stderr = math.inf
    return McEstimate(mean=mean, stderr=stderr, samples=samples, seed=seed)


def mc_pushforward_moment(
    parts: Sequence[Polynomial],
    box: BoxSpec,
    alpha: int | Sequence[int],
    restriction: tuple[float, float] | None = None,
    *,
    mode: str = "sum",
    samples: int,
    seed: int,
) -> McEstimate:
    """Sample mean of prod_j parts_j(X)^alpha_j over uniform X on the box.

    With a restriction (a, b), samples are kept only when mode="sum": the
    part values sum into [a, b], or mode="each": every part value lies in
    [a, b]; rejected samples contribute zero, matching the moments of the
    restricted pushforward measure.
    """
    if isinstance(alpha, int):
        alpha = (alpha,)
    alpha = tuple(alpha)
    if len(alpha) != len(parts):
        raise ValueError("alpha length must match the number of parts")
    stat_exps = np.array([alpha], dtype=np.int64)
    stat_coeffs = np.array([1.0])
    return _zstat(parts, box, stat_exps, stat_coeffs, restriction, mode, samples, seed)


def mc_riesz_residual(
    coefficients: Mapping[Exponent, object],
    parts: Sequence[Polynomial],
    box: BoxSpec,
    restriction: tuple[float, float] | None = None,
    *,
    mode: str = "sum",
    samples: int,
    seed: int,
) -> McEstimate:
    """Sample mean of sum_alpha c_alpha prod_j parts_j(X)^alpha_j (restricted).

    Evaluating the whole linear functional per sample gives the residual of
    a moment constraint together with its own standard error, avoiding the
    correlated-term bookkeeping of combining per-moment estimates.
    """
    items = sorted(coefficients.items())
    if not items:
        raise ValueError("empty constraint")
    stat_exps = np.array([alpha for alpha, _ in items], dtype=np.int64)
    stat_coeffs = np.array([float(c) for _, c in items])
    return _zstat(parts, box, stat_exps, stat_coeffs, restriction, mode, samples, seed)
