"""Sparse multivariate polynomials with exact rational coefficients.

A polynomial in n variables is a map from exponent tuples to nonzero
``fractions.Fraction`` coefficients::

    x1^2 + 1/3*x2  (n=2)   ->   {(2, 0): Fraction(1), (0, 1): Fraction(1, 3)}

Coefficients stay rational through every operation here; conversion to
floats happens only where matrices or samplers need it.  Polynomials are
immutable after construction and all operations are pure, so instances can
be shared freely across threads.

Canonical term order is graded lexicographic (total degree first, then
exponents), used for printing and iteration, which makes ``parse`` and
``to_string`` exact inverses on canonical output.

The accepted text grammar (ASCII, whitespace insignificant, 1-based
variable indices, decimals converted exactly)::

    expr   := ['-'] term (('+'|'-') term)*
    term   := coeff ('*' factor)* | factor ('*' factor)*
    factor := 'x' INT ('^' INT)?
    coeff  := INT | INT '/' INT | DECIMAL
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from types import MappingProxyType
from typing import Mapping, Sequence, Union

Exponent = tuple[int, ...]
Scalar = Union[int, float, Fraction]


class PolynomialSyntaxError(ValueError):
    """Raised for malformed polynomial text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _grlex_key(alpha: Exponent) -> tuple:
    return (sum(alpha), alpha)


class Polynomial:
    """Immutable sparse polynomial with Fraction coefficients."""

    __slots__ = ("dimension", "_terms")

    def __init__(self, dimension: int, terms: Mapping[Exponent, Scalar] | None = None):
        if dimension < 1:
            raise ValueError(f"dimension must be positive, got {dimension}")
        merged: dict[Exponent, Fraction] = {}
        for alpha, c in (terms or {}).items():
            alpha = tuple(alpha)
            if len(alpha) != dimension:
                raise ValueError(
                    f"exponent vector {alpha} has length {len(alpha)}, expected {dimension}"
                )
            if any(e < 0 or not isinstance(e, int) for e in alpha):
                raise ValueError(f"exponents must be nonnegative integers, got {alpha}")
            c = Fraction(c)
            if c:
                merged[alpha] = merged.get(alpha, Fraction(0)) + c
        object.__setattr__(self, "dimension", dimension)
        object.__setattr__(
            self, "_terms", {a: c for a, c in merged.items() if c != 0}
        )

    def __setattr__(self, name, value):
        raise AttributeError("Polynomial is immutable")

    @property
    def terms(self) -> Mapping[Exponent, Fraction]:
        return MappingProxyType(self._terms)

    @classmethod
    def zero(cls, dimension: int) -> "Polynomial":
        return cls(dimension, {})

    @classmethod
    def constant(cls, dimension: int, value: Scalar) -> "Polynomial":
        return cls(dimension, {(0,) * dimension: Fraction(value)})

    @classmethod
    def variable(cls, dimension: int, index: int) -> "Polynomial":
        """The polynomial x_index, with 1-based index."""
        if not 1 <= index <= dimension:
            raise ValueError(f"variable index {index} out of range 1..{dimension}")
        alpha = [0] * dimension
        alpha[index - 1] = 1
        return cls(dimension, {tuple(alpha): Fraction(1)})

    def is_zero(self) -> bool:
        return not self._terms

    def degree(self) -> int:
        """Total degree; 0 for the zero polynomial by convention."""
        if not self._terms:
            return 0
        return max(sum(a) for a in self._terms)

    def constant_term(self) -> Fraction:
        return self._terms.get((0,) * self.dimension, Fraction(0))

    def sorted_terms(self) -> list[tuple[Exponent, Fraction]]:
        """Terms in descending graded-lexicographic order."""
        return sorted(self._terms.items(), key=lambda kv: _grlex_key(kv[0]), reverse=True)

    def coefficient_norm(self) -> Fraction:
        """Sum of absolute coefficient values."""
        return sum((abs(c) for c in self._terms.values()), Fraction(0))

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Polynomial)
            and self.dimension == other.dimension
            and self._terms == other._terms
        )

    def __hash__(self):
        return hash((self.dimension, frozenset(self._terms.items())))

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check_dim(other)
        out = dict(self._terms)
        for a, c in other._terms.items():
            out[a] = out.get(a, Fraction(0)) + c
        return Polynomial(self.dimension, out)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        self._check_dim(other)
        out = dict(self._terms)
        for a, c in other._terms.items():
            out[a] = out.get(a, Fraction(0)) - c
        return Polynomial(self.dimension, out)

    def __neg__(self) -> "Polynomial":
        return Polynomial(self.dimension, {a: -c for a, c in self._terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check_dim(other)
        out: dict[Exponent, Fraction] = {}
        for a, ca in self._terms.items():
            for b, cb in other._terms.items():
                key = tuple(x + y for x, y in zip(a, b))
                out[key] = out.get(key, Fraction(0)) + ca * cb
        return Polynomial(self.dimension, out)

    def scale(self, factor: Scalar) -> "Polynomial":
        f = Fraction(factor)
        return Polynomial(self.dimension, {a: c * f for a, c in self._terms.items()})

    def __pow__(self, k: int) -> "Polynomial":
        if k < 0:
            raise ValueError("negative powers are not defined")
        return power_sequence(self, k)[k]

    def _check_dim(self, other: "Polynomial") -> None:
        if self.dimension != other.dimension:
            raise ValueError(
                f"dimension mismatch: {self.dimension} vs {other.dimension}"
            )

    def evaluate(self, point: Sequence[Scalar]):
        """Evaluate term by term, staying exact for int/Fraction inputs."""
        if len(point) != self.dimension:
            raise ValueError(
                f"point has length {len(point)}, expected {self.dimension}"
            )
        exact = all(isinstance(v, (int, Fraction)) for v in point)
        if exact:
            total = Fraction(0)
            for alpha, c in self._terms.items():
                term = c
                for x, e in zip(point, alpha):
                    if e:
                        term *= Fraction(x) ** e
                total += term
            return total
        total_f = 0.0
        for alpha, c in self._terms.items():
            term_f = float(c)
            for x, e in zip(point, alpha):
                if e:
                    term_f *= float(x) ** e
            total_f += term_f
        return total_f

    def homogeneity_degree(self) -> int | None:
        """Degree t if every term has total degree t, else None.

        A homogeneous result implies Euler's identity sum_i x_i * dp/dx_i = t*p.
        """
        if not self._terms:
            raise ValueError("homogeneity is undefined for the zero polynomial")
        degrees = {sum(a) for a in self._terms}
        if len(degrees) == 1:
            return degrees.pop()
        return None

    def graded_decompose(self) -> "GradedDecomposition":
        """Split into homogeneous parts (g_1, ..., g_t); requires p(0) = 0."""
        if self.constant_term() != 0:
            raise ValueError("graded decomposition requires a zero constant term")
        t = self.degree()
        buckets: list[dict[Exponent, Fraction]] = [{} for _ in range(t)]
        for alpha, c in self._terms.items():
            buckets[sum(alpha) - 1][alpha] = c
        parts = tuple(Polynomial(self.dimension, b) for b in buckets)
        return GradedDecomposition(parts)

    def _derivative(self, index: int) -> "Polynomial":
        """Partial derivative in variable x_index (1-based); internal use."""
        i = index - 1
        out: dict[Exponent, Fraction] = {}
        for alpha, c in self._terms.items():
            e = alpha[i]
            if e:
                beta = list(alpha)
                beta[i] = e - 1
                out[tuple(beta)] = c * e
        return Polynomial(self.dimension, out)

    def to_string(self) -> str:
        """Canonical text form; parse(to_string(p)) == p."""
        if not self._terms:
            return "0"
        pieces: list[str] = []
        for alpha, c in self.sorted_terms():
            factors = []
            for i, e in enumerate(alpha):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = "*".join([str(mag)] + factors)
            if not pieces:
                pieces.append(body if c > 0 else f"-{body}")
            else:
                pieces.append(f"+ {body}" if c > 0 else f"- {body}")
        return " ".join(pieces)

    def __repr__(self) -> str:
        return f"Polynomial({self.dimension}, {self.to_string()!r})"


@dataclass(frozen=True)
class GradedDecomposition:
    """Homogeneous parts (g_1, ..., g_t); parts[k-1] is the degree-k part."""

    parts: tuple[Polynomial, ...]

    def part(self, k: int) -> Polynomial:
        return self.parts[k - 1]

    def reconstruct(self) -> Polynomial:
        total = Polynomial.zero(self.parts[0].dimension)
        for p in self.parts:
            total = total + p
        return total


def multiply(p: Polynomial, q: Polynomial) -> Polynomial:
    return p * q


def power_sequence(g: Polynomial, K: int) -> list[Polynomial]:
    """[g^0, g^1, ..., g^K], computed incrementally g^k = g^(k-1) * g."""
    if K < 0:
        raise ValueError("K must be nonnegative")
    powers = [Polynomial.constant(g.dimension, 1)]
    for _ in range(K):
        powers.append(powers[-1] * g)
    return powers


def homogeneity_degree(p: Polynomial) -> int | None:
    return p.homogeneity_degree()


def graded_decompose(p: Polynomial) -> GradedDecomposition:
    return p.graded_decompose()


def evaluate(p: Polynomial, point: Sequence[Scalar]):
    return p.evaluate(point)


_TOKEN_CHARS = set("+-*/^x.")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if ch.isdigit() or ch == ".":
            j = i
            seen_dot = False
            while j < len(text) and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                if text[j] == ".":
                    seen_dot = True
                j += 1
            lit = text[i:j]
            if lit == ".":
                raise PolynomialSyntaxError("malformed number", i)
            tokens.append(("NUM", lit, i))
            i = j
        elif ch in _TOKEN_CHARS:
            tokens.append((ch, ch, i))
            i += 1
        else:
            raise PolynomialSyntaxError(f"unexpected character {ch!r}", i)
    return tokens


class _Parser:
    def __init__(self, tokens, dimension: int, length: int):
        self.tokens = tokens
        self.dimension = dimension
        self.pos = 0
        self.end = length

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else (None, None, self.end)

    def _take(self, kind: str):
        tok = self._peek()
        if tok[0] != kind:
            raise PolynomialSyntaxError(f"expected {kind!r}", tok[2])
        self.pos += 1
        return tok

    def parse(self) -> dict[Exponent, Fraction]:
        terms: dict[Exponent, Fraction] = {}
        sign = Fraction(1)
        if self._peek()[0] == "-":
            self.pos += 1
            sign = Fraction(-1)
        self._term(terms, sign)
        while self._peek()[0] in ("+", "-"):
            op = self._take(self._peek()[0])[0]
            self._term(terms, Fraction(1) if op == "+" else Fraction(-1))
        tok = self._peek()
        if tok[0] is not None:
            raise PolynomialSyntaxError(f"unexpected token {tok[1]!r}", tok[2])
        return terms

    def _term(self, terms: dict[Exponent, Fraction], sign: Fraction) -> None:
        coeff = Fraction(1)
        alpha = [0] * self.dimension
        tok = self._peek()
        if tok[0] == "NUM":
            coeff = self._coeff()
            while self._peek()[0] == "*":
                self.pos += 1
                self._factor(alpha)
        elif tok[0] == "x":
            self._factor(alpha)
            while self._peek()[0] == "*":
                self.pos += 1
                self._factor(alpha)
        else:
            raise PolynomialSyntaxError("expected a coefficient or a variable", tok[2])
        key = tuple(alpha)
        terms[key] = terms.get(key, Fraction(0)) + sign * coeff

    def _coeff(self) -> Fraction:
        tok = self._take("NUM")
        if "." in tok[1]:
            value = Fraction(tok[1])
        else:
            value = Fraction(int(tok[1]))
            if self._peek()[0] == "/":
                self.pos += 1
                den_tok = self._take("NUM")
                if "." in den_tok[1]:
                    raise PolynomialSyntaxError("denominator must be an integer", den_tok[2])
                den = int(den_tok[1])
                if den == 0:
                    raise PolynomialSyntaxError("zero denominator", den_tok[2])
                value /= den
        return value

    def _factor(self, alpha: list[int]) -> None:
        tok = self._take("x")
        idx_tok = self._take("NUM")
        if "." in idx_tok[1]:
            raise PolynomialSyntaxError("variable index must be an integer", idx_tok[2])
        index = int(idx_tok[1])
        if not 1 <= index <= self.dimension:
            raise PolynomialSyntaxError(
                f"variable index {index} out of range 1..{self.dimension}", tok[2]
            )
        power = 1
        if self._peek()[0] == "^":
            self.pos += 1
            pow_tok = self._take("NUM")
            if "." in pow_tok[1]:
                raise PolynomialSyntaxError("exponent must be an integer", pow_tok[2])
            power = int(pow_tok[1])
        alpha[index - 1] += power


def parse_polynomial(text: str, dimension: int) -> Polynomial:
    """Parse the grammar above into a canonical Polynomial."""
    tokens = _tokenize(text)
    if not tokens:
        raise PolynomialSyntaxError("empty polynomial", 0)
    terms = _Parser(tokens, dimension, len(text)).parse()
    return Polynomial(dimension, terms)
