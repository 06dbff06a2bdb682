"""Command line entry point: ``qmb spectrum | verify | normal-form | schur``.

Exit codes: 0 success, 1 verification failure or mismatch, 2 usage or parse error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from .expr import ExpressionError, parse_expression
from .fock import NotProportional, eigenvalue_on, partitions
from .ncalg import RewriteBudgetExceeded, step_budget
from .qmatrices import build_y
from .scalars import Q, Scalar
from .symfun import SpectralFormula, factorial_schur, spectral_rhs
from .verify import CHECK_NAMES, expand, run_suite

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


# -- argument helpers ---------------------------------------------------------

def _int_list(text: str) -> List[int]:
    """``"2"``, ``"1,3"`` or ``"1-3"``."""
    out: List[int] = []
    try:
        for part in text.split(","):
            part = part.strip()
            if "-" in part.lstrip("-"):
                lo, hi = part.split("-", 1)
                out.extend(range(int(lo), int(hi) + 1))
            else:
                out.append(int(part))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected integers like 2, 1,3 or 1-3, got {text!r}")
    return out


def _q_mode(text: str):
    if text in ("sym", "symbolic"):
        return None
    try:
        value = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"--q takes 'sym' or a nonzero rational p/r, got {text!r}")
    if value == 0:
        raise argparse.ArgumentTypeError("--q must be nonzero")
    return value


def _partition_arg(text: str) -> tuple:
    body = text.strip().strip("()")
    if not body:
        return ()
    try:
        parts = tuple(int(v) for v in body.split(","))
    except ValueError:
        raise UsageError(f"malformed partition {text!r}")
    if any(v < 0 for v in parts) or any(a < b for a, b in zip(parts, parts[1:])):
        raise UsageError(f"{text!r} is not a partition")
    return parts


def _scalar_json(value: Scalar) -> dict:
    return {str(e): (c if isinstance(c, int) else str(c)) for e, c in value.items()}


def _value(value: Scalar, q0: Optional[Fraction]):
    return value if q0 is None else value.eval_at(q0)


def _render_value(value) -> str:
    return value.render() if isinstance(value, Scalar) else str(value)


def _json_value(value):
    if isinstance(value, Scalar):
        return _scalar_json(value)
    return value.numerator if value.denominator == 1 else str(value)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _k_range(ks: Optional[Sequence[int]], n: int) -> List[int]:
    if ks is None:
        return list(range(1, n + 1))
    bad = [k for k in ks if not 1 <= k <= n]
    if bad:
        raise UsageError(f"k must lie in 1..{n}, got {bad}")
    return list(ks)


# -- commands -----------------------------------------------------------------

def cmd_spectrum(args) -> int:
    n = args.n
    if n < 1:
        raise UsageError("--n must be >= 1")
    if args.lambda_max < 0:
        raise UsageError("--lambda-max must be >= 0")
    ks = _k_range(args.k, n)
    rows = []
    for lam in partitions(n, args.lambda_max):
        for k in ks:
            formula = spectral_rhs(SpectralFormula("Thm1", k), n, lam)
            try:
                fock = eigenvalue_on(build_y(n, k), lam)
            except NotProportional as exc:
                print(f"error: y_{k} is not scalar on lambda={lam.render()}: {exc}", file=sys.stderr)
                return EXIT_FAIL
            if fock != formula:
                print(
                    f"error: mismatch at lambda={lam.render()}, k={k}: "
                    f"Fock action gives {fock.render()}, closed form gives {formula.render()}",
                    file=sys.stderr,
                )
                return EXIT_FAIL
            rows.append((lam, k, _value(fock, args.q)))
    if args.format == "json":
        data = [{"lambda": list(lam), "k": k, "eigenvalue": _json_value(v)} for lam, k, v in rows]
        text = json.dumps(data, indent=2) + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
        writer.writerow(["lambda", "k", "eigenvalue"])
        for lam, k, v in rows:
            writer.writerow([lam.render(), k, _render_value(v)])
        text = buf.getvalue()
    else:
        text = "".join(f"{lam.render()}\t{k}\t{_render_value(v)}\n" for lam, k, v in rows)
    _emit(text, args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    names = CHECK_NAMES if args.suite is None else [s.strip() for s in args.suite.split(",") if s.strip()]
    unknown = [s for s in names if s not in CHECK_NAMES]
    if unknown:
        raise UsageError(f"unknown check(s): {', '.join(unknown)}; choose from {', '.join(CHECK_NAMES)}")
    if args.jobs < 1:
        raise UsageError("--jobs must be >= 1")
    ids = []
    for name in names:
        ids += expand(name, n=args.n, lambda_max=args.lambda_max, k=args.k)
    report = run_suite(ids, args.jobs)
    if args.format == "json":
        text = report.to_json() + "\n"
    elif args.format == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, quoting=csv.QUOTE_NONNUMERIC, lineterminator="\n")
        writer.writerow(["check", "params", "status", "witness", "correction_factor", "millis"])
        for e in report.entries:
            d = e.to_dict()
            writer.writerow([d["check"], json.dumps(d["params"], sort_keys=True), d["status"],
                             d.get("witness", ""), d.get("correction_factor", ""), d["millis"]])
        text = buf.getvalue()
    else:
        lines = []
        for e in report.entries:
            params = " ".join(f"{k}={v}" for k, v in e.check.params)
            extra = f"  [{e.witness}]" if e.witness else ""
            lines.append(f"{e.status}\t{e.check.name}\t{params}{extra}\n")
        fails = len(report.failed)
        lines.append(f"{len(report.entries)} checks, {fails} failed\n")
        text = "".join(lines)
    _emit(text, args.out)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_normal_form(args) -> int:
    if args.n is not None and args.n < 1:
        raise UsageError("--n must be >= 1")
    try:
        value = parse_expression(args.expression, n=args.n)
    except ExpressionError as exc:
        print(f"error: {exc}", file=sys.stderr)
        print(f"  {args.expression}\n  {' ' * exc.position}^", file=sys.stderr)
        return EXIT_USAGE
    if args.format == "json":
        text = json.dumps({"algebra": value.algebra.name, "normal_form": value.render()}) + "\n"
    else:
        text = value.render() + "\n"
    _emit(text, args.out)
    return EXIT_OK


def _param(text: Optional[str], has_points: bool):
    """``(parameter, variable name)``; a formal ``p`` renders as itself."""
    if text is None:
        text = "q" if has_points else "p"
    if text == "p":
        return Q, "p"
    try:
        value = Scalar.parse(text, "q")
    except ValueError:
        raise UsageError(f"--param takes 'p', 'q' or 'q^k', got {text!r}")
    if not value.is_monomial() or value.items()[0][1] != 1 or value.items()[0][0] == 0:
        raise UsageError(f"--param must be a power q^k with k != 0, got {text!r}")
    return value, "q"


def cmd_schur(args) -> int:
    nu = _partition_arg(args.nu)
    n = args.n if args.n is not None else max(len(nu), 1)
    if n < 1 or len(nu) > n:
        raise UsageError(f"partition {nu} needs at most n = {n} parts")
    points = None
    if args.at is not None:
        points = [p.strip() for p in args.at.split(",")]
        if len(points) != n:
            raise UsageError(f"--at needs {n} values")
    param, var = _param(args.param, points is not None)
    if args.variant == "classical" and args.param is not None:
        raise UsageError("--param applies to the q variant only")
    if args.q is not None and (points is None or var != "q"):
        raise UsageError("--q needs --at and a parameter in q")
    poly = factorial_schur(nu, n, args.variant, param)
    if points is None:
        text = poly.render(var)
        payload = {"nu": list(nu), "n": n, "polynomial": text}
    else:
        try:
            vals = [Scalar.parse(p, var) for p in points]
        except ValueError as exc:
            raise UsageError(str(exc))
        value = _value(poly.substitute(vals), args.q)
        text = value.render(var) if isinstance(value, Scalar) else str(value)
        payload = {"nu": list(nu), "n": n, "value": text}
    _emit(json.dumps(payload) + "\n" if args.format == "json" else text + "\n", args.out)
    return EXIT_OK


# -- parser -------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qmb", description="Exact computations in quantum matrix algebras and their Fock space."
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, formats=("text", "json", "csv"), default="text"):
        p.add_argument("--format", choices=formats, default=default)
        p.add_argument("--out", help="write output to this file instead of stdout")

    sp = sub.add_parser("spectrum", help="eigenvalues of y_k on highest weight vectors, checked two ways")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--k", type=_int_list, help="k values, e.g. 1 or 1-2 (default: all)")
    sp.add_argument("--lambda-max", type=int, default=2, help="bound on the largest part")
    sp.add_argument("--q", type=_q_mode, default=None, help="'sym' (default) or a rational like 1/2")
    common(sp)
    sp.set_defaults(func=cmd_spectrum)

    vp = sub.add_parser("verify", help="run named checks and write a JSON report")
    vp.add_argument("--suite", help=f"comma-separated checks (default: all of {', '.join(CHECK_NAMES)})")
    vp.add_argument("--n", type=_int_list, help="restrict the grid to these n")
    vp.add_argument("--k", type=_int_list, help="restrict the grid to these k")
    vp.add_argument("--lambda-max", type=int, help="override the bound on the largest part")
    vp.add_argument("--jobs", type=int, default=1)
    common(vp, default="json")
    vp.set_defaults(func=cmd_verify)

    np_ = sub.add_parser("normal-form", help="normal-order an expression")
    np_.add_argument("expression")
    np_.add_argument("--n", type=int, help="matrix size (default: inferred from the indices)")
    common(np_, formats=("text", "json"))
    np_.set_defaults(func=cmd_normal_form)

    sc = sub.add_parser("schur", help="factorial Schur polynomial, symbolic or at a point")
    sc.add_argument("nu", help="partition, e.g. 2,1 or (1) or 0")
    sc.add_argument("--n", type=int, help="number of variables (default: number of parts)")
    sc.add_argument("--variant", choices=("q", "classical"), default="q")
    sc.add_argument("--param", help="'p' (formal, the default), 'q' or 'q^k'; with --at it defaults to q")
    sc.add_argument("--at", help="comma-separated values for x1..xn, e.g. q^4,1")
    sc.add_argument("--q", type=_q_mode, default=None, help="evaluate the result at a rational q")
    common(sc, formats=("text", "json"))
    sc.set_defaults(func=cmd_schur)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        step_budget()
    except ValueError:
        print("error: QMB_STEP_BUDGET must be an integer", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except RewriteBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
