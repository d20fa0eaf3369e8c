"""Closed-form moments of box measures and their polynomial pushforwards.

Everything here is exact rational arithmetic.  The normalized Lebesgue
measure on the box B = [-r, r]^n has monomial moments

    E[x^alpha] = prod_i r^alpha_i / (alpha_i + 1)   (alpha_i all even, else 0)

and the pushforward of that measure under a polynomial map g has k-th
moment E[g(X)^k], obtained by expanding g^k and integrating term by term.

The expansion is the hot path: for an n-variable quadratic form raised to
the 16th power it reaches millions of terms.  ``MomentExtender`` therefore
keeps a single current power of g and walks it upward one multiplication at
a time, in one of two exact representations:

* a dict mapping exponent tuples to Python ints (arbitrary precision), used
  for small problems and as the overflow-safe fallback;
* packed int64 arrays (one bit field per variable) processed by the kernel
  backend, used once the per-step work passes a threshold and the proven
  coefficient bound S^k < 2^62 (S = sum of |integer coefficients|) shows
  int64 cannot overflow.

Both give bit-identical rational moments.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import lcm
from typing import Sequence

import numpy as np

from . import kernels
from .poly import Exponent, Polynomial

_PACK_THRESHOLD = 200_000
_INT64_COEFF_BOUND = 1 << 62
_MAX_KEY_BITS = 62


@dataclass(frozen=True)
class BoxSpec:
    """The box B = [-r, r]^n carrying the normalized Lebesgue measure."""

    dimension: int
    radius: Fraction

    def __post_init__(self):
        object.__setattr__(self, "radius", Fraction(self.radius))
        if self.dimension < 1:
            raise ValueError("dimension must be positive")
        if self.radius <= 0:
            raise ValueError("radius must be positive")

    @property
    def volume(self) -> Fraction:
        """(2r)^n, the scaling between normalized and plain Lebesgue volume."""
        return (2 * self.radius) ** self.dimension


@dataclass(frozen=True)
class MomentSequence:
    """Moments (#lambda_0, ..., #lambda_K) of a univariate pushforward."""

    box: BoxSpec
    map_degree: int
    values: tuple[Fraction, ...]

    def __post_init__(self):
        if not self.values or self.values[0] != 1:
            raise ValueError("a pushforward of a probability measure has moment_0 = 1")

    @property
    def order(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class MultiMomentTable:
    """Moments #lambda_alpha, |alpha| <= order, of a vector pushforward."""

    box: BoxSpec
    arity: int
    order: int
    values: dict[Exponent, Fraction] = field(compare=True)

    def __post_init__(self):
        if self.values[(0,) * self.arity] != 1:
            raise ValueError("moment at alpha = 0 must be 1")

    def __getitem__(self, alpha: Exponent) -> Fraction:
        return self.values[tuple(alpha)]


def box_monomial_moment(alpha: Sequence[int], box: BoxSpec) -> Fraction:
    """Exact E[x^alpha] for the normalized Lebesgue measure on box."""
    if len(alpha) != box.dimension:
        raise ValueError(
            f"exponent vector length {len(alpha)} != box dimension {box.dimension}"
        )
    value = Fraction(1)
    for e in alpha:
        if e % 2:
            return Fraction(0)
        value *= box.radius**e / (e + 1)
    return value


def polynomial_box_moment(p: Polynomial, box: BoxSpec) -> Fraction:
    """Exact integral of p against the normalized Lebesgue measure on box."""
    total = Fraction(0)
    for alpha, c in p.terms.items():
        m = box_monomial_moment(alpha, box)
        if m:
            total += c * m
    return total


def model_moment(n: int, t: int, j: int) -> Fraction:
    """j-th moment n/(n+jt) of the model measure, normalized to mass 1.

    This is the moment sequence of the density (n/t) z^(n/t-1) on [0, 1]:
    the restricted pushforward of a degree-t form has exactly these moments
    up to its unknown total mass.
    """
    if n < 1 or t < 1 or j < 0:
        raise ValueError("need n >= 1, t >= 1, j >= 0")
    return Fraction(n, n + j * t)


def coefficient_box_bound(g: Polynomial, box: BoxSpec) -> Fraction:
    """sum |c_alpha| r^|alpha|, a certified upper bound for max |g| on box."""
    return sum(
        (abs(c) * box.radius ** sum(a) for a, c in g.terms.items()), Fraction(0)
    )


class MomentExtender:
    """Incrementally extends the pushforward moment list of a fixed map.

    Each #lambda_k is computed exactly once; re-requesting a lower order is
    free.  ``multiplications`` counts power steps, for auditing reuse.
    """

    def __init__(self, g: Polynomial, box: BoxSpec):
        if g.is_zero():
            raise ValueError("the map polynomial must be nonzero")
        if g.dimension != box.dimension:
            raise ValueError("polynomial and box dimensions differ")
        self.g = g
        self.box = box
        self.homogeneous_degree = g.homogeneity_degree() if not g.is_zero() else None
        den = lcm(*(c.denominator for c in g.terms.values()))
        self._den = den
        self._g_int = {a: int(c * den) for a, c in g.terms.items()}
        self._coeff_sum = sum(abs(c) for c in self._g_int.values())
        self._var_degree = max(
            max(a[i] for a in g.terms) for i in range(g.dimension)
        )
        self.values: list[Fraction] = [Fraction(1)]
        self.multiplications = 0
        self._power: dict[Exponent, int] | None = {(0,) * g.dimension: 1}
        self._keys: np.ndarray | None = None
        self._coeffs: np.ndarray | None = None
        self._bits = 0

    def extend_to(self, order: int) -> list[Fraction]:
        """Return [#lambda_0, ..., #lambda_order], extending as needed."""
        while len(self.values) <= order:
            self._step(order)
        return self.values[: order + 1]

    # -- power stepping -------------------------------------------------

    def _step(self, target_order: int) -> None:
        k = len(self.values)  # computing #lambda_k now
        if self._power is not None:
            next_size = len(self._power) * len(self._g_int)
            if next_size > _PACK_THRESHOLD and self._packable(k, target_order):
                self._pack(target_order)
        if self._keys is not None and not self._fits_packed(k, target_order):
            self._unpack()
        self.multiplications += 1
        if self._keys is not None:
            gk, gc = self._packed_g()
            self._keys, self._coeffs = kernels.convolve_packed(
                self._keys, self._coeffs, gk, gc
            )
            self.values.append(self._moment_packed(k))
        else:
            power = self._power
            out: dict[Exponent, int] = {}
            for a, ca in power.items():
                for b, cb in self._g_int.items():
                    key = tuple(x + y for x, y in zip(a, b))
                    prod = ca * cb
                    if key in out:
                        out[key] += prod
                    else:
                        out[key] = prod
            self._power = {a: c for a, c in out.items() if c}
            self.values.append(self._moment_dict(k))

    def _packable(self, k: int, target_order: int) -> bool:
        if self.homogeneous_degree is None:
            return False
        order = max(k, target_order)
        bits = max(1, (order * self._var_degree).bit_length())
        if self.g.dimension * bits > _MAX_KEY_BITS:
            return False
        return self._coeff_sum**order < _INT64_COEFF_BOUND

    def _fits_packed(self, k: int, target_order: int) -> bool:
        if self._coeff_sum**k >= _INT64_COEFF_BOUND:
            return False
        if k * self._var_degree >= (1 << self._bits):
            if self._packable(k, target_order):
                self._pack(target_order)  # repack with wider bit fields
                return True
            return False
        return True

    def _pack(self, target_order: int) -> None:
        order = max(len(self.values), target_order)
        bits = max(1, (order * self._var_degree).bit_length())
        if self._power is not None:
            items = self._power.items()
        else:
            items = zip(self._decode_keys(), (int(c) for c in self._coeffs))
        encoded = sorted(
            (self._encode(a, bits), int(c)) for a, c in items
        )
        self._keys = np.array([k for k, _ in encoded], dtype=np.int64)
        self._coeffs = np.array([c for _, c in encoded], dtype=np.int64)
        self._bits = bits
        self._power = None

    def _unpack(self) -> None:
        self._power = {
            a: int(c) for a, c in zip(self._decode_keys(), self._coeffs)
        }
        self._keys = None
        self._coeffs = None
        self._bits = 0

    def _encode(self, alpha: Exponent, bits: int) -> int:
        key = 0
        for i, e in enumerate(alpha):
            key |= e << (bits * i)
        return key

    def _decode_keys(self):
        mask = (1 << self._bits) - 1
        for key in self._keys:
            key = int(key)
            yield tuple((key >> (self._bits * i)) & mask for i in range(self.g.dimension))

    def _packed_g(self):
        gk = np.array(
            [self._encode(a, self._bits) for a in sorted(self._g_int)], dtype=np.int64
        )
        gc = np.array([self._g_int[a] for a in sorted(self._g_int)], dtype=np.int64)
        return gk, gc

    # -- exact moment of the current power ------------------------------

    def _moment_dict(self, k: int) -> Fraction:
        r = self.box.radius
        groups: dict[tuple[int, int], int] = {}
        for alpha, c in self._power.items():
            den = 1
            for e in alpha:
                if e % 2:
                    den = 0
                    break
                den *= e + 1
            if den:
                key = (sum(alpha), den)
                groups[key] = groups.get(key, 0) + c
        total = Fraction(0)
        for (deg, den), s in sorted(groups.items()):
            total += Fraction(s, den) * r**deg
        return total / Fraction(self._den) ** k

    def _moment_packed(self, k: int) -> Fraction:
        dens, sums = kernels.moment_reduce(
            self._keys, self._coeffs, self.g.dimension, self._bits
        )
        total = Fraction(0)
        for d, s in zip(dens, sums):
            total += Fraction(int(s), int(d))
        total *= self.box.radius ** (k * self.homogeneous_degree)
        return total / Fraction(self._den) ** k


def pushforward_moments(g: Polynomial, box: BoxSpec, order: int) -> MomentSequence:
    """Exact moments E[g(X)^k], k = 0..order, for X uniform on box."""
    extender = MomentExtender(g, box)
    values = extender.extend_to(order)
    return MomentSequence(box=box, map_degree=g.degree(), values=tuple(values))


def pushforward_moments_multi(
    parts: Sequence[Polynomial], box: BoxSpec, order: int
) -> MultiMomentTable:
    """Exact moments E[prod_j parts_j(X)^alpha_j] for all |alpha| <= order."""
    if not parts:
        raise ValueError("need at least one component polynomial")
    for p in parts:
        if p.dimension != box.dimension:
            raise ValueError("component dimension differs from box dimension")
    m = len(parts)
    one = Polynomial.constant(box.dimension, 1)
    products: dict[Exponent, Polynomial] = {(0,) * m: one}
    values: dict[Exponent, Fraction] = {}

    def product_for(alpha: Exponent) -> Polynomial:
        if alpha in products:
            return products[alpha]
        j = max(i for i, e in enumerate(alpha) if e)
        prev = list(alpha)
        prev[j] -= 1
        poly = product_for(tuple(prev)) * parts[j]
        products[alpha] = poly
        return poly

    for total in range(order + 1):
        for alpha in _compositions(total, m):
            values[alpha] = polynomial_box_moment(product_for(alpha), box)
    return MultiMomentTable(box=box, arity=m, order=order, values=values)


def _compositions(total: int, m: int):
    """All alpha in N^m with |alpha| = total, lexicographically."""
    if m == 1:
        yield (total,)
        return
    for head in range(total, -1, -1):
        for rest in _compositions(total - head, m - 1):
            yield (head,) + rest
