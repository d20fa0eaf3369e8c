"""Benchmark the numba kernels against the pure-numpy fallback.

Runs each hot kernel on both backends with identical inputs and reports
wall time and speedup.  Results are identical across backends (bit-equal
for integer kernels), so this is purely a throughput comparison.

Usage:
    python benchmarks/bench_backends.py [--samples N] [--power-order K]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from levelvol.kernels import _numpy as numpy_backend

try:
    from levelvol.kernels import _numba as numba_backend
except ImportError:
    numba_backend = None


def time_call(func, *args, repeat=3):
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = func(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def bench_mc(samples: int):
    rng = np.random.default_rng(0)
    exps = (2 * rng.integers(0, 3, size=(35, 4))).astype(np.int64)
    coeffs = rng.random(35)
    args = (12345, 0, samples, -1.0, 1.0, exps, coeffs, 0.0, 1.0)
    yield "mc_count (35 terms, n=4)", args, "mc_count"

    offsets = np.array([0, 20, 35], dtype=np.int64)
    stat_exps = np.array([[1, 0], [0, 1], [1, 1]], dtype=np.int64)
    stat_coeffs = np.array([1.0, -0.5, 0.25])
    zargs = (
        12345, 0, samples, -1.0, 1.0, exps, coeffs, offsets,
        stat_exps, stat_coeffs, 1, -1.0, 1.0,
    )
    yield "mc_zstat (two parts, restricted)", zargs, "mc_zstat"


def bench_power(order: int):
    # packed powers of the 10-variable quadratic form sum x_i^2
    n, bits = 10, 6
    gkeys = np.array([np.int64(2) << (bits * i) for i in range(n)], dtype=np.int64)
    gcoeffs = np.ones(n, dtype=np.int64)

    def run(backend):
        keys = np.zeros(1, dtype=np.int64)
        coeffs = np.ones(1, dtype=np.int64)
        out = None
        for _ in range(order):
            keys, coeffs = backend.convolve_packed(keys, coeffs, gkeys, gcoeffs)
            out = backend.moment_reduce(keys, coeffs, n, bits)
        return out

    return run


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--samples", type=int, default=1_000_000)
    parser.add_argument("--power-order", type=int, default=12)
    args = parser.parse_args()

    if numba_backend is None:
        print("numba is not importable; only the numpy backend will run")

    rows = []
    for label, call_args, attr in bench_mc(args.samples):
        t_np, r_np = time_call(getattr(numpy_backend, attr), *call_args)
        if numba_backend is not None:
            getattr(numba_backend, attr)(*call_args)  # compile outside timing
            t_nb, r_nb = time_call(getattr(numba_backend, attr), *call_args)
            match = np.allclose(np.atleast_1d(r_np), np.atleast_1d(r_nb), rtol=1e-12)
            rows.append((label, t_np, t_nb, match))
        else:
            rows.append((label, t_np, None, True))

    label = f"poly power chain (n=10, K={args.power_order})"
    run_np = bench_power(args.power_order)
    t_np, r_np = time_call(run_np, numpy_backend)
    if numba_backend is not None:
        run_nb = bench_power(args.power_order)
        run_nb(numba_backend)  # compile outside timing
        t_nb, r_nb = time_call(run_nb, numba_backend)
        match = np.array_equal(r_np[0], r_nb[0]) and np.array_equal(r_np[1], r_nb[1])
        rows.append((label, t_np, t_nb, match))
    else:
        rows.append((label, t_np, None, True))

    width = max(len(r[0]) for r in rows)
    header = f"{'kernel':<{width}}  {'numpy':>9}  {'numba':>9}  {'speedup':>8}  match"
    print(header)
    print("-" * len(header))
    for label, t_np, t_nb, match in rows:
        if t_nb is None:
            print(f"{label:<{width}}  {t_np:>8.3f}s  {'-':>9}  {'-':>8}  {match}")
        else:
            print(
                f"{label:<{width}}  {t_np:>8.3f}s  {t_nb:>8.3f}s"
                f"  {t_np / t_nb:>7.1f}x  {match}"
            )


if __name__ == "__main__":
    main()
