"""Hot numeric kernels with a numba backend and a pure-numpy fallback.

The backend is chosen once, at import time, from the environment variable
``LEVELVOL_BACKEND``:

* ``numba``  -- require the numba JIT backend (raise if numba is missing),
* ``numpy``  -- force the vectorized pure-numpy implementation,
* unset      -- use numba when importable, otherwise fall back to numpy.

Both backends implement the same function signatures and produce identical
integer results; floating-point accumulations may differ in the last ulps
because summation order differs.  ``benchmarks/bench_backends.py`` compares
their throughput.

Kernels

* ``sample_uniform(seed, start, count, n, lo, hi)``
    Counter-based uniform draws.  Coordinate ``j`` of sample ``s`` is derived
    from the 64-bit splitmix64 hash of ``seed`` and the counter ``s*n + j``:
    the stream is indexed by sample number, never by thread or chunk, so any
    partition of the index range reproduces the same numbers.
* ``mc_count(seed, start, count, lo, hi, exps, coeffs, a, b)``
    Number of uniform samples with ``a <= p(x) <= b`` (exact integer); the
    ambient dimension is the column count of ``exps``.
* ``mc_zstat(seed, start, count, lo, hi, exps, coeffs, offsets,
             stat_exps, stat_coeffs, mode, a, b)``
    Sum and sum of squares of a per-sample statistic
    ``y = sum_q w_q * prod_j z_j**E_qj`` where ``z_j`` are the values of m
    polynomials (rows ``offsets[j]:offsets[j+1]`` of the term table),
    optionally zeroed outside a restriction on z.
* ``convolve_packed(keys, coeffs, gkeys, gcoeffs)``
    One step of a polynomial power in packed-exponent form: outer product of
    terms, duplicate monomial keys merged.  Keys are int64 with a fixed bit
    field per variable; coefficients are int64 (callers must guarantee no
    overflow, see moments module).
* ``moment_reduce(keys, coeffs, n, bits)``
    Groups even-exponent monomials of a packed polynomial by the exact
    denominator prod(alpha_i + 1) of the box moment; returns the distinct
    denominators and the int64 sums of their coefficients.
"""

from __future__ import annotations

import os

_requested = os.environ.get("LEVELVOL_BACKEND", "").strip().lower()
if _requested not in ("", "numba", "numpy"):
    raise ImportError(
        f"LEVELVOL_BACKEND={_requested!r} is not recognized; use 'numba' or 'numpy'"
    )

if _requested == "numpy":
    from . import _numpy as _impl

    BACKEND = "numpy"
elif _requested == "numba":
    from . import _numba as _impl

    BACKEND = "numba"
else:
    try:
        from . import _numba as _impl

        BACKEND = "numba"
    except ImportError:
        from . import _numpy as _impl

        BACKEND = "numpy"

sample_uniform = _impl.sample_uniform
mc_count = _impl.mc_count
mc_zstat = _impl.mc_zstat
convolve_packed = _impl.convolve_packed
moment_reduce = _impl.moment_reduce

__all__ = [
    "BACKEND",
    "sample_uniform",
    "mc_count",
    "mc_zstat",
    "convolve_packed",
    "moment_reduce",
]
