"""Command line interface: ``whh <subcommand> [options]``.

Exit codes: 0 all checks pass, 1 invalid input, 2 inequality or tolerance
breach, 3 numerical failure (quadrature or eigensolver non-convergence).
"""
from __future__ import annotations

import argparse
import csv
import io
import sys
import time

from .. import scalar_means as sm
from ..eigen import EigenSolverError
from ..quadrature import QuadratureError
from .report import dumps
from .sweeps import SweepConfig, open_problem_search, run

EXIT_OK, EXIT_INPUT, EXIT_BREACH, EXIT_NUMERIC = 0, 1, 2, 3

DEFAULTS = {
    "verify-scalar": dict(seed=42, trials=1000),
    "verify-functional": dict(seed=7, trials=50, grid_size=401),
    "verify-operator": dict(seed=1, trials=200, dim=6),
    "search-open-problem": dict(seed=0, trials=20, grid_size=401),
}
# which tolerance --tol overrides for each sweep
TOL_KEY = {
    "verify-scalar": "scalar",
    "verify-functional": "pointwise",
    "verify-operator": "loewner",
    "search-open-problem": "combined",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _floats(text):
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="whh", description="Weighted Hermite-Hadamard means and verification sweeps.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, fmt=True):
        if fmt:
            p.add_argument("--format", choices=("json", "csv"), default="json")
        p.add_argument("--out", metavar="PATH", help="write the report here instead of stdout")

    p = sub.add_parser("table1", help="reproduce the weighted logarithmic mean table at lambda = 2/3")
    p.add_argument("--tol", type=float, default=sm.TABLE1_TOL, help="allowed absolute deviation")
    common(p)

    p = sub.add_parser("means", help="print every scalar mean of a pair")
    p.add_argument("--a", type=float, required=True)
    p.add_argument("--b", type=float, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=0.5)
    p.add_argument("--tol", type=float, default=sm.MEAN_TOL, help="quadrature tolerance")
    common(p)

    for name, desc in (
        ("verify-scalar", "randomised scalar (inversion) inequality sweep"),
        ("verify-functional", "randomised convex grid function (conjugation) sweep"),
        ("verify-operator", "randomised SPD matrix (Loewner order) sweep"),
        ("search-open-problem", "search for gaps between the two logarithmic functional means"),
    ):
        d = DEFAULTS[name]
        p = sub.add_parser(name, help=desc)
        p.add_argument("--seed", type=int, default=d["seed"])
        p.add_argument("--trials", type=int, default=d["trials"])
        p.add_argument("--tol", type=float, default=None, help=f"override the {TOL_KEY[name]!r} tolerance")
        if name != "search-open-problem":
            p.add_argument("--lambda", dest="lam", type=_floats, default=None, help="lambda grid, e.g. 0.25,0.5")
            p.add_argument("--a", type=_floats, default=None, help="grid of refinement reference points")
        if name in ("verify-functional", "search-open-problem"):
            p.add_argument("--grid-size", type=int, default=d["grid_size"])
        if name == "verify-operator":
            p.add_argument("--dim", type=int, default=d["dim"])
        common(p, fmt=name != "search-open-problem")
    return parser


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def cmd_table1(args) -> int:
    start = time.perf_counter()
    rows = sm.table1()
    elapsed = time.perf_counter() - start
    ok = all(r.ok(args.tol) for r in rows)
    if args.format == "csv":
        table = [["a", "b", "frak", "bb", "closed", "max_abs_deviation", "within_tol"]]
        for r in rows:
            table.append([r.a, r.b, *(repr(v) for v in r.computed), repr(max(r.deviations)), r.ok(args.tol)])
        _emit(_csv(table), args.out)
    else:
        report = {
            "schema": 1,
            "command": "table1",
            "lambda": sm.TABLE1_LAMBDA,
            "tolerance": args.tol,
            "rows": [
                {
                    "a": r.a,
                    "b": r.b,
                    "computed": dict(zip(("frak", "bb", "closed"), r.computed)),
                    "reference": dict(zip(("frak", "bb", "closed"), r.reference)),
                    "max_abs_deviation": max(r.deviations),
                    "within_tol": r.ok(args.tol),
                }
                for r in rows
            ],
            "seconds": elapsed,
            "status": "pass" if ok else "fail",
        }
        _emit(dumps(report), args.out)
    return EXIT_OK if ok else EXIT_BREACH


def scalar_means_of(a, b, lam, tol=sm.MEAN_TOL) -> dict:
    return {
        "arith": sm.arith(a, b, lam),
        "geom": sm.geom(a, b, lam),
        "harm": sm.harm(a, b, lam),
        "log_mean": sm.log_mean(a, b),
        "weighted_log_closed": sm.weighted_log_closed(a, b, lam).value,
        "weighted_log_frak": sm.weighted_log_frak(a, b, lam, tol).value,
        "weighted_log_bb": sm.weighted_log_bb(a, b, lam, tol).value,
        "m_lambda_inversion": sm.m_lambda_inversion(a, b, lam, tol),
    }


def cmd_means(args) -> int:
    values = scalar_means_of(args.a, args.b, args.lam, args.tol)
    if args.format == "csv":
        _emit(_csv([["mean", "value"], *([k, repr(v)] for k, v in values.items())]), args.out)
    else:
        _emit(dumps({"schema": 1, "command": "means", "a": args.a, "b": args.b, "lambda": args.lam, "means": values}), args.out)
    return EXIT_OK


def _config(args) -> SweepConfig:
    tolerances = {} if args.tol is None else {TOL_KEY[args.command]: args.tol}
    return SweepConfig(
        seed=args.seed,
        trials=args.trials,
        lambda_grid=getattr(args, "lam", None) or [],
        a_grid=getattr(args, "a", None) or [],
        grid_size=getattr(args, "grid_size", 401),
        dim=getattr(args, "dim", 6),
        tolerances=tolerances,
    )


def cmd_verify(args) -> int:
    report = run(args.command, _config(args))
    if args.format == "csv":
        rows = [["check_id", "instances", "failures", "worst_margin", "tolerance"]]
        rows += [[c["check_id"], c["instances"], c["failures"], c["worst_margin"], c["tolerance"]] for c in report["checks"]]
        _emit(_csv(rows), args.out)
    else:
        _emit(dumps(report), args.out)
    return EXIT_OK if report["status"] == "pass" else EXIT_BREACH


def cmd_search(args) -> int:
    report = open_problem_search(_config(args))
    _emit(dumps(report), args.out)
    # the search reports evidence; only the quadratic control pairs can breach
    return EXIT_OK if all(q["within_tolerance"] for q in report["quadratic_pairs"]) else EXIT_BREACH


COMMANDS = {
    "table1": cmd_table1,
    "means": cmd_means,
    "verify-scalar": cmd_verify,
    "verify-functional": cmd_verify,
    "verify-operator": cmd_verify,
    "search-open-problem": cmd_search,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (QuadratureError, EigenSolverError) as exc:
        print(f"whh: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"whh: invalid input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
