"""Backend equivalence and determinism of the hot kernels."""

import importlib.util

import numpy as np
import pytest

from levelvol.kernels import _numpy as knp

_has_numba = importlib.util.find_spec("numba") is not None
if _has_numba:
    from levelvol.kernels import _numba as knb

needs_numba = pytest.mark.skipif(not _has_numba, reason="numba unavailable")


def _sample_terms():
    exps = np.array([[2, 0], [0, 2], [1, 1]], dtype=np.int64)
    coeffs = np.array([1.0, 1.0, -0.5])
    return exps, coeffs


class TestStream:
    def test_counter_indexing_is_chunk_invariant(self):
        whole = knp.sample_uniform(9, 0, 1000, 3, -1.0, 1.0)
        tail = knp.sample_uniform(9, 600, 400, 3, -1.0, 1.0)
        assert np.array_equal(whole[600:], tail)

    def test_range(self):
        x = knp.sample_uniform(3, 0, 10_000, 2, -1.3, 1.3)
        assert x.min() >= -1.3 and x.max() <= 1.3

    @needs_numba
    def test_backends_produce_identical_samples(self):
        a = knb.sample_uniform(17, 5, 500, 4, -2.0, 2.0)
        b = knp.sample_uniform(17, 5, 500, 4, -2.0, 2.0)
        assert np.array_equal(a, b)


class TestMcKernels:
    @needs_numba
    def test_count_identical_across_backends(self):
        exps, coeffs = _sample_terms()
        a = knb.mc_count(11, 0, 200_000, -1.0, 1.0, exps, coeffs, 0.0, 1.0)
        b = knp.mc_count(11, 0, 200_000, -1.0, 1.0, exps, coeffs, 0.0, 1.0)
        assert a == b

    @needs_numba
    def test_zstat_matches_across_backends(self):
        exps, coeffs = _sample_terms()
        offsets = np.array([0, 2, 3], dtype=np.int64)
        stat_exps = np.array([[1, 0], [0, 2]], dtype=np.int64)
        stat_coeffs = np.array([1.0, -0.25])
        for mode, a, b in ((0, 0.0, 0.0), (1, -0.5, 0.5), (2, -0.5, 0.5)):
            ra = knb.mc_zstat(23, 0, 50_000, -1.0, 1.0, exps, coeffs, offsets,
                              stat_exps, stat_coeffs, mode, a, b)
            rb = knp.mc_zstat(23, 0, 50_000, -1.0, 1.0, exps, coeffs, offsets,
                              stat_exps, stat_coeffs, mode, a, b)
            assert ra[2] == rb[2]
            assert ra[0] == pytest.approx(rb[0], rel=1e-12, abs=1e-12)
            assert ra[1] == pytest.approx(rb[1], rel=1e-12, abs=1e-12)

    def test_count_against_direct_evaluation(self):
        exps, coeffs = _sample_terms()
        samples = 5000
        x = knp.sample_uniform(31, 0, samples, 2, -1.0, 1.0)
        values = (
            coeffs[0] * x[:, 0] ** 2 + coeffs[1] * x[:, 1] ** 2
            + coeffs[2] * x[:, 0] * x[:, 1]
        )
        expected = int(np.count_nonzero((values >= 0.1) & (values <= 0.9)))
        got = knp.mc_count(31, 0, samples, -1.0, 1.0, exps, coeffs, 0.1, 0.9)
        assert got == expected


class TestPackedKernels:
    def _random_packed(self, rng, size, bits, n):
        limit = (1 << bits) // 4
        exps = rng.integers(0, limit, size=(size, n))
        keys = np.zeros(size, dtype=np.int64)
        for i in range(n):
            keys |= exps[:, i].astype(np.int64) << (bits * i)
        keys = np.unique(keys)
        coeffs = rng.integers(-50, 50, size=keys.size).astype(np.int64)
        return keys, coeffs

    def test_convolve_matches_dict_reference(self):
        rng = np.random.default_rng(2)
        bits, n = 8, 3
        ka, ca = self._random_packed(rng, 40, bits, n)
        kg, cg = self._random_packed(rng, 7, bits, n)
        out_k, out_c = knp.convolve_packed(ka, ca, kg, cg)
        reference = {}
        for key_a, c_a in zip(ka, ca):
            for key_g, c_g in zip(kg, cg):
                key = int(key_a + key_g)
                reference[key] = reference.get(key, 0) + int(c_a) * int(c_g)
        assert list(out_k) == sorted(reference)
        assert {int(k): int(c) for k, c in zip(out_k, out_c)} == reference

    @needs_numba
    def test_convolve_identical_across_backends(self):
        rng = np.random.default_rng(3)
        ka, ca = self._random_packed(rng, 60, 7, 4)
        kg, cg = self._random_packed(rng, 9, 7, 4)
        a = knb.convolve_packed(ka, ca, kg, cg)
        b = knp.convolve_packed(ka, ca, kg, cg)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])

    def test_moment_reduce_matches_reference(self):
        rng = np.random.default_rng(5)
        bits, n = 6, 3
        keys, coeffs = self._random_packed(rng, 80, bits, n)
        dens, sums = knp.moment_reduce(keys, coeffs, n, bits)
        reference = {}
        mask = (1 << bits) - 1
        for key, c in zip(keys, coeffs):
            alpha = [(int(key) >> (bits * i)) & mask for i in range(n)]
            if any(e % 2 for e in alpha):
                continue
            den = 1
            for e in alpha:
                den *= e + 1
            reference[den] = reference.get(den, 0) + int(c)
        assert {int(d): int(s) for d, s in zip(dens, sums)} == reference

    @needs_numba
    def test_moment_reduce_identical_across_backends(self):
        rng = np.random.default_rng(6)
        keys, coeffs = self._random_packed(rng, 100, 6, 4)
        a = knb.moment_reduce(keys, coeffs, 4, 6)
        b = knp.moment_reduce(keys, coeffs, 4, 6)
        assert np.array_equal(a[0], b[0]) and np.array_equal(a[1], b[1])
