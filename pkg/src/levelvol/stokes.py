"""Stokes moment constraints and SDP problem export for banded sub-level sets.

For K = {x : a <= g(x) <= b} with g = g1 + g2 (graded parts of a quadratic),
the pushforward of the box measure under x -> (g1(x), g2(x)) turns the
n-dimensional volume problem into a bivariate moment problem.  Applying the
divergence theorem with the field X(x) = x to test functions
z1^i z2^j h(z) that vanish on the boundary produces exact linear relations
among the restricted pushforward moments; those relations strengthen the
moment relaxation substantially.

This module generates the constraint families

* ``stokes_constraints_nonhomog``: band restriction a <= z1 + z2 <= b,
  test polynomials q_ij of degree i + j + 2;
* ``stokes_constraints_multihomog``: several homogeneous constraints
  g_j <= 1 (restriction set [0, 1]^m), test polynomials
  z1^i z2^j (1-z1)^k (1-z2)^l with k, l >= 1;

and assembles/export the moment relaxation data (PSD blocks plus the
equality rows) for external semidefinite solvers.  No SDP is solved here.

Export formats: sparse SDPA ``.dat-s`` (block sizes, objective vector, one
``matno blkno i j value`` entry per line, upper triangle, 17 significant
digits; equalities as paired +/- rows of a diagonal block; objective vector
carries -1 on phi_0 because SDPA minimizes) and a lossless JSON mirror with
exact rational values.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import IO

from .moments import BoxSpec, MultiMomentTable, pushforward_moments_multi
from .poly import Exponent, Polynomial


@dataclass
class LinearMomentConstraint:
    """sum_alpha c_alpha phi_alpha = 0 over multi-indices alpha."""

    coefficients: dict[Exponent, Fraction]

    def __post_init__(self):
        cleaned = {
            tuple(a): Fraction(c) for a, c in self.coefficients.items() if c
        }
        if not cleaned:
            raise ValueError("a moment constraint needs a nonzero coefficient")
        arity = len(next(iter(cleaned)))
        if any(len(a) != arity for a in cleaned):
            raise ValueError("mixed multi-index arities in one constraint")
        self.coefficients = cleaned

    @property
    def arity(self) -> int:
        return len(next(iter(self.coefficients)))

    @property
    def degree(self) -> int:
        return max(sum(a) for a in self.coefficients)


def _z(i: int) -> Polynomial:
    return Polynomial.variable(2, i)


def _zmono(i: int, j: int) -> Polynomial:
    return Polynomial(2, {(i, j): Fraction(1)})


def stokes_poly_qij(n: int, a, b, i: int, j: int) -> Polynomial:
    """Test polynomial whose restricted-pushforward integral vanishes.

    q_ij = (n+i+2j) z1^i z2^j (b-z1-z2)(z1+z2-a)
         + (z1+2z2) z1^i z2^j (a+b-2z1-2z2)
    """
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    if i < 0 or j < 0:
        raise ValueError("indices must be nonnegative")
    z1, z2 = _z(1), _z(2)
    mono = _zmono(i, j)
    const = Polynomial.constant
    band = (const(2, b) - z1 - z2) * (z1 + z2 - const(2, a))
    euler = (z1 + z2.scale(2)) * (const(2, a + b) - z1.scale(2) - z2.scale(2))
    return mono * band.scale(n + i + 2 * j) + mono * euler


def stokes_constraints_nonhomog(n: int, a, b, d: int) -> list[LinearMomentConstraint]:
    """All constraints L(q_ij) = 0 with deg(q_ij) = i + j + 2 <= 2d."""
    if d < 1:
        raise ValueError("d must be at least 1")
    out = []
    limit = 2 * d - 2
    for total in range(limit + 1):
        for i in range(total, -1, -1):
            q = stokes_poly_qij(n, a, b, i, total - i)
            out.append(LinearMomentConstraint(dict(q.terms)))
    return out


def stokes_constraints_multihomog(
    n: int, t1: int, t2: int, i: int, j: int, k: int, l: int
) -> LinearMomentConstraint:
    """Stokes relation for two homogeneous constraints g1 <= 1, g2 <= 1.

    (n + i t1 + j t2) * z1^i z2^j (1-z1)^k (1-z2)^l
      - k t1 * z1^(i+1) z2^j (1-z1)^(k-1) (1-z2)^l
      - l t2 * z1^i z2^(j+1) (1-z1)^k (1-z2)^(l-1)    integrates to zero.
    """
    if k < 1 or l < 1:
        raise ValueError("need k >= 1 and l >= 1 (boundary factors must vanish)")
    one = Polynomial.constant(2, 1)
    z1, z2 = _z(1), _z(2)
    om1 = one - z1
    om2 = one - z2
    main = (_zmono(i, j) * om1**k * om2**l).scale(n + i * t1 + j * t2)
    da = (_zmono(i + 1, j) * om1 ** (k - 1) * om2**l).scale(k * t1)
    db = (_zmono(i, j + 1) * om1**k * om2 ** (l - 1)).scale(l * t2)
    poly = main - da - db
    return LinearMomentConstraint(dict(poly.terms))


# -- SDP problem data -------------------------------------------------------


@dataclass(frozen=True)
class SdpBlock:
    """One block of the LMI, in SDPA indexing.

    ``entries`` holds (matno, i, j, value): matno 0 is the constant matrix
    F_0, matno k >= 1 multiplies variable k; (i, j) is 1-based upper
    triangle.  Negative ``size`` marks a diagonal block.
    """

    name: str
    size: int
    entries: tuple[tuple[int, int, int, Fraction], ...]


@dataclass
class SdpProblem:
    """max phi_0 over the relaxation blocks plus Stokes equality rows."""

    dim_z: int
    d: int
    a: Fraction
    b: Fraction
    box: BoxSpec
    variables: tuple[Exponent, ...]
    moments: MultiMomentTable
    blocks: list[SdpBlock] = field(default_factory=list)
    equalities: list[LinearMomentConstraint] = field(default_factory=list)

    @property
    def mdim(self) -> int:
        return len(self.variables)

    def objective(self) -> list[Fraction]:
        """SDPA minimization vector: -1 on phi_0 (negate the solver optimum)."""
        c = [Fraction(0)] * self.mdim
        c[0] = Fraction(-1)
        return c

    def block_summary(self) -> list[str]:
        lines = [f"mdim {self.mdim}", f"nblock {len(self.blocks)}"]
        for blk in self.blocks:
            lines.append(f"block {blk.name} size {blk.size} entries {len(blk.entries)}")
        lines.append(f"equalities {len(self.equalities)}")
        return lines


def _multi_indices(order: int) -> list[Exponent]:
    """All (i, j) with i + j <= order, graded with i descending inside a level."""
    out = []
    for total in range(order + 1):
        for i in range(total, -1, -1):
            out.append((i, total - i))
    return out


def build_sdp_nonhomog(g: Polynomial, box: BoxSpec, a, b, d: int) -> SdpProblem:
    """Assemble the strengthened degree-d relaxation for a <= g <= b, deg g = 2.

    Blocks: M_d(phi) >= 0, M_d(#lambda) - M_d(phi) >= 0, the localizing
    matrix M_{d-1}(h~ phi) >= 0 for h~ = (b-z1-z2)(z1+z2-a), and the Stokes
    equality rows of degree <= 2d encoded as paired +/- diagonal entries.
    Decision variables are phi_alpha, |alpha| <= 2d, graded order; the
    pushforward moment table is computed exactly to order 2d + 2.
    """
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError("need a < b")
    if d < 1:
        raise ValueError("d must be at least 1")
    if g.degree() != 2:
        raise ValueError("only quadratic maps are supported (degree exactly 2)")
    decomposition = g.graded_decompose()
    g1, g2 = decomposition.parts
    if g1.is_zero() or g2.is_zero():
        raise ValueError(
            "degenerate graded decomposition: both a linear and a quadratic part are required"
        )
    table = pushforward_moments_multi((g1, g2), box, 2 * d + 2)
    variables = tuple(_multi_indices(2 * d))
    var_index = {alpha: idx + 1 for idx, alpha in enumerate(variables)}

    basis_d = _multi_indices(d)
    basis_loc = _multi_indices(d - 1)

    moment_entries = []
    dominance_entries = []
    for p, beta in enumerate(basis_d, start=1):
        for q_pos in range(p, len(basis_d) + 1):
            gamma = basis_d[q_pos - 1]
            alpha = (beta[0] + gamma[0], beta[1] + gamma[1])
            k = var_index[alpha]
            moment_entries.append((k, p, q_pos, Fraction(1)))
            dominance_entries.append((k, p, q_pos, Fraction(-1)))
            if table[alpha]:
                dominance_entries.append((0, p, q_pos, -table[alpha]))

    z1, z2 = _z(1), _z(2)
    const = Polynomial.constant
    h_tilde = (const(2, b) - z1 - z2) * (z1 + z2 - const(2, a))
    localizing_entries = []
    for p, beta in enumerate(basis_loc, start=1):
        for q_pos in range(p, len(basis_loc) + 1):
            gamma = basis_loc[q_pos - 1]
            for delta, c_delta in sorted(h_tilde.terms.items()):
                alpha = (beta[0] + gamma[0] + delta[0], beta[1] + gamma[1] + delta[1])
                localizing_entries.append((var_index[alpha], p, q_pos, c_delta))

    equalities = stokes_constraints_nonhomog(box.dimension, a, b, d)
    stokes_entries = []
    for row, constraint in enumerate(equalities):
        for alpha, c in sorted(constraint.coefficients.items()):
            k = var_index[alpha]
            stokes_entries.append((k, 2 * row + 1, 2 * row + 1, c))
            stokes_entries.append((k, 2 * row + 2, 2 * row + 2, -c))

    blocks = [
        SdpBlock("moment", len(basis_d), tuple(moment_entries)),
        SdpBlock("dominance", len(basis_d), tuple(dominance_entries)),
        SdpBlock("localizing", len(basis_loc), tuple(localizing_entries)),
        SdpBlock("stokes", -2 * len(equalities), tuple(stokes_entries)),
    ]
    return SdpProblem(
        dim_z=2,
        d=d,
        a=a,
        b=b,
        box=box,
        variables=variables,
        moments=table,
        blocks=blocks,
        equalities=equalities,
    )


# -- export / import --------------------------------------------------------


def _write_text(sink, text: str) -> int:
    if hasattr(sink, "write"):
        sink.write(text)
    else:
        Path(sink).write_text(text)
    return len(text.encode())


def export_sdpa(problem: SdpProblem, sink: str | Path | IO[str]) -> int:
    """Write sparse SDPA ``.dat-s`` text; returns the number of bytes."""
    lines = [str(problem.mdim), str(len(problem.blocks))]
    lines.append(" ".join(str(blk.size) for blk in problem.blocks))
    lines.append(" ".join(_fmt(c) for c in problem.objective()))
    rows = []
    for blkno, blk in enumerate(problem.blocks, start=1):
        for k, i, j, value in blk.entries:
            rows.append((k, blkno, i, j, value))
    rows.sort(key=lambda r: r[:4])
    for k, blkno, i, j, value in rows:
        lines.append(f"{k} {blkno} {i} {j} {_fmt(value)}")
    return _write_text(sink, "\n".join(lines) + "\n")


def _fmt(value: Fraction) -> str:
    return f"{float(value):.17g}"


def read_sdpa(source: str | Path | IO[str]) -> dict:
    """Parse a ``.dat-s`` file back into plain data (floats), for round-trips."""
    if hasattr(source, "read"):
        text = source.read()
    else:
        text = Path(source).read_text()
    lines = [ln for ln in text.splitlines() if ln.strip()]
    mdim = int(lines[0])
    nblock = int(lines[1])
    sizes = [int(tok) for tok in lines[2].split()]
    c = [float(tok) for tok in lines[3].split()]
    entries = []
    for ln in lines[4:]:
        k, blkno, i, j, value = ln.split()
        entries.append((int(k), int(blkno), int(i), int(j), float(value)))
    return {"mdim": mdim, "nblock": nblock, "sizes": sizes, "c": c, "entries": entries}


def _frac_str(value: Fraction) -> str:
    return str(Fraction(value))


def export_sdp_json(problem: SdpProblem, sink: str | Path | IO[str]) -> int:
    """Lossless JSON mirror of the problem data (exact rationals as "p/q")."""
    doc = {
        "dim_z": problem.dim_z,
        "d": problem.d,
        "a": _frac_str(problem.a),
        "b": _frac_str(problem.b),
        "box": {
            "dimension": problem.box.dimension,
            "radius": _frac_str(problem.box.radius),
        },
        "pushforward_moments": [
            [list(alpha), _frac_str(value)]
            for alpha, value in sorted(problem.moments.values.items())
        ],
        "blocks": [
            {
                "name": blk.name,
                "size": blk.size,
                "entries": [
                    [k, i, j, _frac_str(v)] for k, i, j, v in blk.entries
                ],
            }
            for blk in problem.blocks
        ],
        "equalities": [
            [[list(alpha), _frac_str(c)] for alpha, c in sorted(eq.coefficients.items())]
            for eq in problem.equalities
        ],
        "objective": {"sense": "max", "variable": [0, 0]},
    }
    return _write_text(sink, json.dumps(doc, indent=1, sort_keys=True) + "\n")


def import_sdp_json(source: str | Path | IO[str]) -> SdpProblem:
    """Inverse of export_sdp_json; reconstructs an equal SdpProblem."""
    if hasattr(source, "read"):
        doc = json.load(source)
    else:
        doc = json.loads(Path(source).read_text())
    box = BoxSpec(doc["box"]["dimension"], Fraction(doc["box"]["radius"]))
    d = doc["d"]
    moments = MultiMomentTable(
        box=box,
        arity=doc["dim_z"],
        order=2 * d + 2,
        values={
            tuple(alpha): Fraction(value)
            for alpha, value in doc["pushforward_moments"]
        },
    )
    blocks = [
        SdpBlock(
            name=blk["name"],
            size=blk["size"],
            entries=tuple(
                (k, i, j, Fraction(v)) for k, i, j, v in blk["entries"]
            ),
        )
        for blk in doc["blocks"]
    ]
    equalities = [
        LinearMomentConstraint(
            {tuple(alpha): Fraction(c) for alpha, c in rows}
        )
        for rows in doc["equalities"]
    ]
    return SdpProblem(
        dim_z=doc["dim_z"],
        d=d,
        a=Fraction(doc["a"]),
        b=Fraction(doc["b"]),
        box=box,
        variables=tuple(_multi_indices(2 * d)),
        moments=moments,
        blocks=blocks,
        equalities=equalities,
    )
