"""Pure-numpy implementations of the hot kernels (see package docstring).

Sampling is processed in fixed-size chunks; the counter-based stream makes
the chunking invisible in the results.  Integer outputs are bit-identical to
the numba backend.
"""

from __future__ import annotations

import numpy as np

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / (1 << 53)

_CHUNK = 1 << 15


def _mix64(z):
    z = z ^ (z >> np.uint64(30))
    z = z * _MIX1
    z = z ^ (z >> np.uint64(27))
    z = z * _MIX2
    return z ^ (z >> np.uint64(31))


def _uniform_block(seed, start, count, n, lo, hi):
    counters = (
        np.arange(start, start + count, dtype=np.uint64)[:, None] * np.uint64(n)
        + np.arange(n, dtype=np.uint64)[None, :]
    )
    z = _mix64(np.uint64(seed) + (counters + np.uint64(1)) * _GOLDEN)
    return lo + (hi - lo) * ((z >> np.uint64(11)) * _U53)


def sample_uniform(seed, start, count, n, lo, hi):
    return _uniform_block(seed, start, count, n, lo, hi)


def _eval_block(x, exps, coeffs, t0, t1):
    val = np.zeros(x.shape[0])
    for t in range(t0, t1):
        term = np.full(x.shape[0], coeffs[t])
        for j in range(x.shape[1]):
            e = exps[t, j]
            if e == 1:
                term = term * x[:, j]
            elif e > 1:
                term = term * x[:, j] ** e
        val += term
    return val


def mc_count(seed, start, count, lo, hi, exps, coeffs, a, b):
    n = exps.shape[1]
    hits = 0
    for off in range(0, count, _CHUNK):
        size = min(_CHUNK, count - off)
        x = _uniform_block(seed, start + off, size, n, lo, hi)
        val = _eval_block(x, exps, coeffs, 0, len(coeffs))
        hits += int(np.count_nonzero((val >= a) & (val <= b)))
    return hits


def mc_zstat(seed, start, count, lo, hi, exps, coeffs, offsets,
             stat_exps, stat_coeffs, mode, a, b):
    n = exps.shape[1]
    m = len(offsets) - 1
    total = 0.0
    total_sq = 0.0
    accepted = 0
    for off in range(0, count, _CHUNK):
        size = min(_CHUNK, count - off)
        x = _uniform_block(seed, start + off, size, n, lo, hi)
        z = np.empty((size, m))
        for p in range(m):
            z[:, p] = _eval_block(x, exps, coeffs, offsets[p], offsets[p + 1])
        if mode == 1:
            zs = z.sum(axis=1)
            keep = (zs >= a) & (zs <= b)
        elif mode == 2:
            keep = np.all((z >= a) & (z <= b), axis=1)
        else:
            keep = np.ones(size, dtype=bool)
        accepted += int(np.count_nonzero(keep))
        y = np.zeros(size)
        for q in range(len(stat_coeffs)):
            term = np.full(size, stat_coeffs[q])
            for p in range(m):
                e = stat_exps[q, p]
                if e == 1:
                    term = term * z[:, p]
                elif e > 1:
                    term = term * z[:, p] ** e
            y += term
        y[~keep] = 0.0
        total += float(y.sum())
        total_sq += float((y * y).sum())
    return total, total_sq, accepted


def convolve_packed(keys, coeffs, gkeys, gcoeffs):
    kk = (keys[:, None] + gkeys[None, :]).ravel()
    cc = (coeffs[:, None] * gcoeffs[None, :]).ravel()
    order = np.argsort(kk, kind="stable")
    kk = kk[order]
    cc = cc[order]
    boundary = np.empty(kk.size, dtype=bool)
    boundary[0] = True
    np.not_equal(kk[1:], kk[:-1], out=boundary[1:])
    starts = np.nonzero(boundary)[0]
    return kk[starts].copy(), np.add.reduceat(cc, starts)


def moment_reduce(keys, coeffs, n, bits):
    mask = np.int64((1 << bits) - 1)
    exps = np.empty((keys.size, n), dtype=np.int64)
    tmp = keys.copy()
    for j in range(n):
        exps[:, j] = tmp & mask
        tmp = tmp >> bits
    even = ~np.any(exps & 1, axis=1)
    dens = np.prod(exps[even] + 1, axis=1)
    csel = coeffs[even]
    order = np.argsort(dens, kind="stable")
    dens = dens[order]
    csel = csel[order]
    if dens.size == 0:
        return dens, csel
    boundary = np.empty(dens.size, dtype=bool)
    boundary[0] = True
    np.not_equal(dens[1:], dens[:-1], out=boundary[1:])
    starts = np.nonzero(boundary)[0]
    return dens[starts].copy(), np.add.reduceat(csel, starts)
