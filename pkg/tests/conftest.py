"""Shared fixtures and builders for the test suite."""

from __future__ import annotations

import random
from fractions import Fraction

import numpy as np
import pytest

from levelvol import BoxSpec, Polynomial
from levelvol import kernels


def ball_polynomial(n: int) -> Polynomial:
    """sum_i x_i^2 in n variables."""
    terms = {}
    for i in range(n):
        alpha = [0] * n
        alpha[i] = 2
        terms[tuple(alpha)] = Fraction(1)
    return Polynomial(n, terms)


def unit_box(n: int, radius=Fraction(1)) -> BoxSpec:
    return BoxSpec(n, Fraction(radius))


def random_polynomial(rng: random.Random, n: int, max_degree: int,
                      max_terms: int = 5) -> Polynomial:
    """Random small polynomial with rational coefficients, possibly zero terms."""
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        alpha = tuple(rng.randint(0, max_degree) for _ in range(n))
        if sum(alpha) > max_degree:
            continue
        terms[alpha] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    if not terms:
        terms[(0,) * n] = Fraction(1)
    return Polynomial(n, terms)


def random_sos_form(rng: random.Random, n: int, t: int, squares: int = 2) -> Polynomial:
    """Sum of squares of random integer forms of degree t/2: nonnegative, homogeneous."""
    assert t % 2 == 0
    half = t // 2
    total = Polynomial.zero(n)
    for _ in range(squares):
        form_terms = {}
        for alpha in _exponents_of_degree(n, half):
            c = rng.randint(-2, 2)
            if c:
                form_terms[alpha] = Fraction(c)
        if not form_terms:
            alpha = [0] * n
            alpha[rng.randrange(n)] = half
            form_terms[tuple(alpha)] = Fraction(1)
        form = Polynomial(n, form_terms)
        total = total + form * form
    return total


def _exponents_of_degree(n: int, degree: int):
    if n == 1:
        yield (degree,)
        return
    for head in range(degree + 1):
        for rest in _exponents_of_degree(n - 1, degree - head):
            yield (head,) + rest


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Absorb one-time JIT compilation so timed tests measure the algorithms."""
    exps = np.array([[2, 0], [0, 2]], dtype=np.int64)
    coeffs = np.array([1.0, 1.0])
    kernels.sample_uniform(1, 0, 4, 2, -1.0, 1.0)
    kernels.mc_count(1, 0, 16, -1.0, 1.0, exps, coeffs, 0.0, 1.0)
    kernels.mc_zstat(
        1, 0, 16, -1.0, 1.0, exps, coeffs,
        np.array([0, 2], dtype=np.int64),
        np.array([[1]], dtype=np.int64), np.array([1.0]), 1, 0.0, 1.0,
    )
    keys = np.array([0, 1], dtype=np.int64)
    vals = np.array([1, 1], dtype=np.int64)
    kernels.convolve_packed(keys, vals, keys, vals)
    kernels.moment_reduce(np.array([0, 2], dtype=np.int64), vals, 1, 6)
