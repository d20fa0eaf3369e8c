"""numba implementations of the hot kernels (see package docstring)."""

from __future__ import annotations

import numpy as np
from numba import njit

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_MIX1 = np.uint64(0xBF58476D1CE4E5B9)
_MIX2 = np.uint64(0x94D049BB133111EB)
_U53 = 1.0 / (1 << 53)


@njit(cache=True, inline="always")
def _mix64(z):
    z ^= z >> np.uint64(30)
    z *= _MIX1
    z ^= z >> np.uint64(27)
    z *= _MIX2
    z ^= z >> np.uint64(31)
    return z


@njit(cache=True, inline="always")
def _u01(seed, counter):
    z = _mix64(seed + (counter + np.uint64(1)) * _GOLDEN)
    return (z >> np.uint64(11)) * _U53


@njit(cache=True)
def sample_uniform(seed, start, count, n, lo, hi):
    out = np.empty((count, n))
    s0 = np.uint64(seed)
    width = hi - lo
    for s in range(count):
        base = np.uint64(start + s) * np.uint64(n)
        for j in range(n):
            out[s, j] = lo + width * _u01(s0, base + np.uint64(j))
    return out


@njit(cache=True, inline="always")
def _eval_terms(x, exps, coeffs, t0, t1):
    val = 0.0
    for t in range(t0, t1):
        term = coeffs[t]
        for j in range(x.size):
            e = exps[t, j]
            if e == 1:
                term *= x[j]
            elif e > 1:
                term *= x[j] ** np.int64(e)
        val += term
    return val


@njit(cache=True)
def mc_count(seed, start, count, lo, hi, exps, coeffs, a, b):
    n = exps.shape[1]
    s0 = np.uint64(seed)
    width = hi - lo
    x = np.empty(n)
    hits = 0
    for s in range(count):
        base = np.uint64(start + s) * np.uint64(n)
        for j in range(n):
            x[j] = lo + width * _u01(s0, base + np.uint64(j))
        val = _eval_terms(x, exps, coeffs, 0, coeffs.size)
        if a <= val <= b:
            hits += 1
    return hits


@njit(cache=True)
def mc_zstat(seed, start, count, lo, hi, exps, coeffs, offsets,
             stat_exps, stat_coeffs, mode, a, b):
    """Accumulate sum and sum of squares of the per-sample z statistic.

    mode: 0 no restriction, 1 keep a <= sum(z) <= b, 2 keep a <= z_j <= b
    for every j.  Rejected samples contribute 0 to the statistic.
    Returns (sum, sum_sq, accepted).
    """
    n = exps.shape[1]
    m = offsets.size - 1
    s0 = np.uint64(seed)
    width = hi - lo
    x = np.empty(n)
    z = np.empty(m)
    total = 0.0
    total_sq = 0.0
    accepted = 0
    for s in range(count):
        base = np.uint64(start + s) * np.uint64(n)
        for j in range(n):
            x[j] = lo + width * _u01(s0, base + np.uint64(j))
        for p in range(m):
            z[p] = _eval_terms(x, exps, coeffs, offsets[p], offsets[p + 1])
        if mode == 1:
            zs = 0.0
            for p in range(m):
                zs += z[p]
            if not (a <= zs <= b):
                continue
        elif mode == 2:
            ok = True
            for p in range(m):
                if not (a <= z[p] <= b):
                    ok = False
                    break
            if not ok:
                continue
        accepted += 1
        y = 0.0
        for q in range(stat_coeffs.size):
            term = stat_coeffs[q]
            for p in range(m):
                e = stat_exps[q, p]
                if e == 1:
                    term *= z[p]
                elif e > 1:
                    term *= z[p] ** np.int64(e)
            y += term
        total += y
        total_sq += y * y
    return total, total_sq, accepted


@njit(cache=True)
def convolve_packed(keys, coeffs, gkeys, gcoeffs):
    na = keys.size
    ng = gkeys.size
    kk = np.empty(na * ng, np.int64)
    cc = np.empty(na * ng, np.int64)
    p = 0
    for i in range(na):
        ka = keys[i]
        ca = coeffs[i]
        for j in range(ng):
            kk[p] = ka + gkeys[j]
            cc[p] = ca * gcoeffs[j]
            p += 1
    order = np.argsort(kk)
    out_k = np.empty(na * ng, np.int64)
    out_c = np.empty(na * ng, np.int64)
    m = 0
    prev = np.int64(-1)
    for t in range(order.size):
        idx = order[t]
        k = kk[idx]
        if m > 0 and k == prev:
            out_c[m - 1] += cc[idx]
        else:
            out_k[m] = k
            out_c[m] = cc[idx]
            prev = k
            m += 1
    return out_k[:m].copy(), out_c[:m].copy()


@njit(cache=True)
def moment_reduce(keys, coeffs, n, bits):
    mask = np.int64((1 << bits) - 1)
    dens = np.empty(keys.size, np.int64)
    csel = np.empty(keys.size, np.int64)
    m = 0
    for t in range(keys.size):
        key = keys[t]
        den = np.int64(1)
        even = True
        for j in range(n):
            e = key & mask
            if e & np.int64(1):
                even = False
                break
            den *= e + 1
            key >>= bits
        if even:
            dens[m] = den
            csel[m] = coeffs[t]
            m += 1
    order = np.argsort(dens[:m])
    out_d = np.empty(m, np.int64)
    out_s = np.empty(m, np.int64)
    k = 0
    prev = np.int64(-1)
    for t in range(m):
        idx = order[t]
        d = dens[idx]
        if k > 0 and d == prev:
            out_s[k - 1] += csel[idx]
        else:
            out_d[k] = d
            out_s[k] = csel[idx]
            prev = d
            k += 1
    return out_d[:k].copy(), out_s[:k].copy()
