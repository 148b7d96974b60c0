"""spreadlab command line.

    spreadlab construct --n 5 --which A
    spreadlab spectrum --file m.txt
    spreadlab bounds --file m.txt --m-max 5
    spreadlab verify --n 50
    spreadlab search --n 5 --seed 1 --method nelder_mead --out best.json
    spreadlab sweep --n 2..8 --seed 42 --out sweep.csv

Exit codes: 0 ok, 1 usage / input error, 2 a bound violation or failed
certificate, 3 numeric failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .bounds import M_MAX, REPORT_TOL, verify_bounds
from .constructions import ExtremalFamily, certificate
from .errors import NumericError, SpreadLabError
from .matrix import format_matrix, read_matrix, require_dimension
from .search import METHODS, SearchConfig, minimize_spread, sweep_csv, sweep_experiment
from .spectral import CLUSTER_TOL, distinct_eigenvalue_count, eigenvalues, spread

EXIT_OK, EXIT_USAGE, EXIT_VIOLATION, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def _n_range(text: str) -> tuple[int, int]:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            return int(lo), int(hi)
        return int(text), int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or A..B, got {text!r}") from None


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="spreadlab", description="Spread bounds for nonnegative matrices with a zero diagonal entry.")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("construct", help="print a matrix of the extremal family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--which", choices=("A", "U", "N", "M", "S"), required=True)
    p.add_argument("--out")

    p = sub.add_parser("spectrum", help="eigenvalues and spread of a matrix file")
    p.add_argument("--file", required=True)
    p.add_argument("--method", choices=("auto", "lapack", "qr", "exact"), default="auto")
    p.add_argument("--cluster-tol", type=float, default=CLUSTER_TOL)
    p.add_argument("--out")

    p = sub.add_parser("bounds", help="bound report for a nonnegative matrix file")
    p.add_argument("--file", required=True)
    p.add_argument("--m-max", type=int, default=M_MAX)
    p.add_argument("--tol", type=float, default=REPORT_TOL, help="report and JLL tolerance")
    p.add_argument("--cluster-tol", type=float, default=CLUSTER_TOL)
    p.add_argument("--method", choices=("auto", "lapack", "qr", "exact"), default="auto")
    p.add_argument("--out")

    p = sub.add_parser("verify", help="exact similarity certificate for the extremal family")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")

    for name, help_ in (("search", "minimize the spread for one n"), ("sweep", "search over a range of n, CSV output")):
        p = sub.add_parser(name, help=help_)
        if name == "search":
            p.add_argument("--n", type=int, required=True)
        else:
            p.add_argument("--n", type=_n_range, required=True, metavar="A..B")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--restarts", type=int, default=4)
        p.add_argument("--iters", type=int, default=2000)
        p.add_argument("--density", type=float, default=1.0)
        p.add_argument("--method", choices=METHODS, default="nelder_mead")
        p.add_argument("--tol", type=float, default=REPORT_TOL)
        p.add_argument("--out")
    return ap


def _emit(text: str, out: str | None) -> None:
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _json(obj) -> str:
    return json.dumps(obj, indent=2) + "\n"


def _config(args, n: int) -> SearchConfig:
    try:
        return SearchConfig(
            n=n,
            seed=args.seed,
            restarts=args.restarts,
            iters_per_restart=args.iters,
            density=args.density,
            method=args.method,
        )
    except (SpreadLabError, ValueError) as exc:
        raise UsageError(str(exc)) from None


def cmd_construct(args) -> int:
    require_dimension(args.n, 2)
    _emit(format_matrix(ExtremalFamily.build(args.n).get(args.which)), args.out)
    return EXIT_OK


def cmd_spectrum(args) -> int:
    M = read_matrix(args.file)
    S = eigenvalues(M, args.method)
    _emit(
        _json(
            {
                "format_version": 1,
                "n": M.n,
                "method": S.method,
                "eigenvalues": [[z.real, z.imag] for z in S],
                "spread": spread(S),
                "max_residual": S.max_residual,
                "distinct_eigenvalues": distinct_eigenvalue_count(S, args.cluster_tol),
                "cluster_tol": args.cluster_tol,
            }
        ),
        args.out,
    )
    return EXIT_OK


def cmd_bounds(args) -> int:
    M = read_matrix(args.file)
    report = verify_bounds(
        M,
        args.m_max,
        report_tol=args.tol,
        jll_tol=args.tol,
        cluster_tol=args.cluster_tol,
        method=args.method,
    )
    _emit(_json(report.to_dict()), args.out)
    return EXIT_VIOLATION if report.violations else EXIT_OK


def cmd_verify(args) -> int:
    cert = certificate(args.n)
    _emit(_json(cert), args.out)
    ok = all(v for k, v in cert.items() if k.endswith("_exact"))
    return EXIT_OK if ok else EXIT_VIOLATION


def cmd_search(args) -> int:
    result = minimize_spread(_config(args, args.n))
    report = verify_bounds(result.best_matrix, report_tol=args.tol)
    doc = result.to_dict()
    doc["alert"] = result.gap < -args.tol
    doc["violations"] = report.violations
    _emit(_json(doc), args.out)
    return EXIT_VIOLATION if (doc["alert"] or report.violations) else EXIT_OK


def cmd_sweep(args) -> int:
    n_min, n_max = args.n
    if n_min < 2 or n_max < n_min:
        raise UsageError(f"sweep needs 2 <= A <= B, got {n_min}..{n_max}")
    rows = sweep_experiment(n_min, n_max, _config(args, n_min))
    _emit(sweep_csv(rows), args.out)
    if any(r["violations"] for r in rows):
        return EXIT_VIOLATION
    if any(r["error"] for r in rows):
        return EXIT_NUMERIC
    return EXIT_OK


COMMANDS = {
    "construct": cmd_construct,
    "spectrum": cmd_spectrum,
    "bounds": cmd_bounds,
    "verify": cmd_verify,
    "search": cmd_search,
    "sweep": cmd_sweep,
}


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (SpreadLabError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


run = main

if __name__ == "__main__":
    raise SystemExit(main())
