"""Command-line interface.

Subcommands
    approx       run the eigenvalue hierarchy, emit a JSON or CSV report
    moments      print exact pushforward moments as p/q strings
    mc           Monte-Carlo volume of a band {a <= g <= b}
    sdp-export   write the strengthened bivariate relaxation (.dat-s + .json)

Exit codes: 0 success, 2 input error, 3 numerical failure before the first
hierarchy degree completes.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from pathlib import Path

from .hierarchy import integral_discriminant, run_hierarchy
from .moments import BoxSpec, pushforward_moments
from .oracle import mc_volume
from .poly import Polynomial, PolynomialSyntaxError, parse_polynomial
from .stokes import build_sdp_nonhomog, export_sdp_json, export_sdpa

_SCHEMA_VERSION = 1

_BASIS_CHOICES = {
    "monomial": "monomial",
    "chebyshev": "chebyshev",
    "orthonormal-model": "orthonormal-model",
    "orthonormal-push": "orthonormal-pushforward",
}


class _InputError(Exception):
    pass


def _add_common(parser: argparse.ArgumentParser) -> None:
    src = parser.add_mutually_exclusive_group(required=True)
    src.add_argument("--expr", help="polynomial text, e.g. 'x1^2+x2^2'")
    src.add_argument("--file", help="path to a file holding the polynomial text")
    parser.add_argument("--n", type=int, required=True, help="ambient dimension")
    parser.add_argument(
        "--radius", default="1", help="box half-width r as a rational string"
    )


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="levelvol",
        description="volume bounds for polynomial sub-level sets",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("approx", help="run the hierarchy of eigenvalue bounds")
    _add_common(p)
    p.add_argument("--dmax", type=int, default=4, help="largest hierarchy degree")
    p.add_argument("--basis", choices=sorted(_BASIS_CHOICES), default="monomial")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0, help="seed for the input checks")
    p.add_argument("--samples", type=int, default=10_000, help="input-check samples")
    p.add_argument("--out", help="write the report here instead of stdout")

    p = sub.add_parser("moments", help="print exact pushforward moments")
    _add_common(p)
    p.add_argument("--order", type=int, default=4, help="highest moment order K")

    p = sub.add_parser("mc", help="Monte-Carlo volume of {a <= g <= b}")
    _add_common(p)
    p.add_argument("--a", default="0", help="band lower bound")
    p.add_argument("--b", default="1", help="band upper bound")
    p.add_argument("--samples", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("sdp-export", help="export the strengthened relaxation")
    _add_common(p)
    p.add_argument("--a", default="0", help="band lower bound")
    p.add_argument("--b", default="1", help="band upper bound")
    p.add_argument("--d", type=int, default=2, help="relaxation degree")
    p.add_argument("--out", required=True, help="output path prefix")
    return parser


def _load_polynomial(args) -> Polynomial:
    if args.expr is not None:
        text = args.expr
    else:
        try:
            text = Path(args.file).read_text()
        except OSError as exc:
            raise _InputError(f"cannot read {args.file}: {exc}") from exc
    try:
        return parse_polynomial(text.strip(), args.n)
    except PolynomialSyntaxError as exc:
        raise _InputError(f"bad polynomial: {exc}") from exc


def _box(args) -> BoxSpec:
    try:
        radius = Fraction(args.radius)
    except (ValueError, ZeroDivisionError) as exc:
        raise _InputError(f"bad radius {args.radius!r}: {exc}") from exc
    if radius <= 0:
        raise _InputError("radius must be positive")
    return BoxSpec(args.n, radius)


def _cmd_approx(args) -> int:
    g = _load_polynomial(args)
    box = _box(args)
    try:
        report = run_hierarchy(
            g,
            box,
            args.dmax,
            basis=_BASIS_CHOICES[args.basis],
            checks=args.samples > 0,
            check_samples=args.samples,
            seed=args.seed,
        )
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    rows = [rec for rec in report.records if rec.tau is not None]
    if not rows:
        first = report.records[0] if report.records else None
        message = first.error if first and first.error else "no degree completed"
        print(f"error: {message}", file=sys.stderr)
        return 3
    if args.format == "json":
        discriminant = (
            integral_discriminant(report.final_estimate, report.n, report.t)
            if report.final_estimate is not None
            else None
        )
        doc = {
            "schema_version": _SCHEMA_VERSION,
            "n": report.n,
            "t": report.t,
            "radius": str(report.radius),
            "basis": report.basis,
            "rows": [
                {
                    "d": rec.d,
                    "tau": rec.tau,
                    "scaled": rec.scaled,
                    "residual": rec.residual,
                    "reliable": rec.reliable,
                }
                for rec in rows
            ],
            "final_estimate": report.final_estimate,
            "integral_discriminant": discriminant,
            "monotone": report.monotone,
        }
        text = json.dumps(doc, indent=1) + "\n"
    else:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["d", "tau", "scaled", "residual", "reliable"])
        for rec in rows:
            writer.writerow(
                [rec.d, repr(rec.tau), repr(rec.scaled), repr(rec.residual), rec.reliable]
            )
        text = buffer.getvalue()
    for warning in report.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return 0


def _cmd_moments(args) -> int:
    g = _load_polynomial(args)
    box = _box(args)
    if args.order < 0:
        raise _InputError("order must be nonnegative")
    try:
        seq = pushforward_moments(g, box, args.order)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    for k, value in enumerate(seq.values):
        print(f"{k} {value}")
    return 0


def _cmd_mc(args) -> int:
    g = _load_polynomial(args)
    box = _box(args)
    if args.samples < 1:
        raise _InputError("need at least one sample")
    try:
        a, b = Fraction(args.a), Fraction(args.b)
    except (ValueError, ZeroDivisionError) as exc:
        raise _InputError(f"bad band bound: {exc}") from exc
    estimate = mc_volume(g, box, float(a), float(b), args.samples, args.seed)
    print(f"mean {estimate.mean:.17g}")
    print(f"stderr {estimate.stderr:.17g}")
    print(f"samples {estimate.samples}")
    print(f"seed {estimate.seed}")
    return 0


def _cmd_sdp_export(args) -> int:
    g = _load_polynomial(args)
    box = _box(args)
    try:
        a, b = Fraction(args.a), Fraction(args.b)
    except (ValueError, ZeroDivisionError) as exc:
        raise _InputError(f"bad band bound: {exc}") from exc
    if not g.is_zero() and g.homogeneity_degree() is not None:
        raise _InputError(
            "the map is homogeneous; use the 'approx' eigenvalue hierarchy instead"
        )
    try:
        problem = build_sdp_nonhomog(g, box, a, b, args.d)
    except ValueError as exc:
        raise _InputError(str(exc)) from exc
    prefix = Path(args.out)
    export_sdpa(problem, prefix.parent / (prefix.name + ".dat-s"))
    export_sdp_json(problem, prefix.parent / (prefix.name + ".json"))
    for line in problem.block_summary():
        print(line)
    return 0


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "approx": _cmd_approx,
        "moments": _cmd_moments,
        "mc": _cmd_mc,
        "sdp-export": _cmd_sdp_export,
    }
    try:
        return handlers[args.command](args)
    except _InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
