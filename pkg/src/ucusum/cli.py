"""Command-line front end.

Subcommands: ``test``, ``trajectory``, ``theory`` and ``simulate``.
Exit codes are 0 on success, 2 on bad data or configuration and 3 when the
long-run variance estimate is not positive.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys
from dataclasses import replace
from typing import List, Optional

import numpy as np

from .cptest import FIRST_VS_FULL, FIRST_VS_LAST, run_both
from .errors import DataError, DegenerateVarianceError, UcusumError
from .kernels import builtin_kernel, as_series
from .lrv import LrvConfig
from .mcsim import TrajectoryBundle, load_scenarios, run_scenarios, trajectory_bundle
from .samplers import parse_distribution
from .theory import DriftSpec, psi1, psi2, theory_report, theta_mc
from .uproc import diff_processes

EXIT_OK = 0
EXIT_DATA = 2
EXIT_DEGENERATE = 3


def _is_number(cell: str) -> bool:
    try:
        float(cell)
    except ValueError:
        return False
    return True


def read_table(path: str) -> np.ndarray:
    """Read a one- or two-column numeric CSV.

    A first row containing a non-numeric cell is taken as a header. Blank
    lines are skipped. Errors name the offending line.
    """
    try:
        with open(path, newline="", encoding="utf-8") as fh:
            lines = list(csv.reader(fh))
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise DataError(f"{path}: not valid UTF-8") from None

    numbered = [(i + 1, [c.strip() for c in row]) for i, row in enumerate(lines)]
    numbered = [(ln, row) for ln, row in numbered if any(row)]
    if numbered and not all(_is_number(c) for c in numbered[0][1]):
        numbered = numbered[1:]
    if not numbered:
        raise DataError("no observations")

    width = len(numbered[0][1])
    if width not in (1, 2):
        raise DataError(f"line {numbered[0][0]}: expected 1 or 2 columns, got {width}")
    rows = []
    for ln, row in numbered:
        if len(row) != width:
            raise DataError(f"line {ln}: expected {width} columns, got {len(row)}")
        try:
            vals = [float(c) for c in row]
        except ValueError:
            raise DataError(f"line {ln}: non-numeric value in {row!r}") from None
        if not all(math.isfinite(v) for v in vals):
            raise DataError(f"line {ln}: non-finite value in {row!r}")
        rows.append(vals)
    arr = np.asarray(rows, dtype=float)
    return arr[:, 0] if width == 1 else arr


def _read_text(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise DataError(f"cannot read {path}: {exc.strerror}") from None


def _bandwidth(text: str):
    if text == "auto":
        return "auto"
    try:
        return float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"bandwidth must be a number or 'auto', got {text!r}")


def _lrv_config(args) -> LrvConfig:
    return LrvConfig(bandwidth=args.bandwidth, window="bartlett", variant=args.variant)


def _report_text(rep) -> str:
    return (
        f"{rep.method}: T = {rep.statistic:.6f}  p = {rep.p_value:.6g}  "
        f"k_hat = {rep.k_hat}  tau_hat = {rep.tau_hat:.4f}  "
        f"(n = {rep.n}, kernel = {rep.kernel}, sigma2 = {rep.sigma2:.6g})"
    )


def cmd_test(args, out) -> int:
    kernel = builtin_kernel(args.kernel)
    x = as_series(read_table(args.input), kernel)
    reports = run_both(x, kernel, _lrv_config(args))
    wanted = {"fvf": (FIRST_VS_FULL,), "fvl": (FIRST_VS_LAST,), "both": (FIRST_VS_FULL, FIRST_VS_LAST)}
    chosen = [r for r in reports if r.method in wanted[args.method]]
    for rep in chosen:
        out.write((_report_text(rep) if args.text else rep.to_json()) + "\n")
    return EXIT_OK


def _drift_from_args(args) -> Optional[DriftSpec]:
    given = [args.theta_f, args.theta_g, args.rho]
    if all(v is None for v in given):
        return None
    if any(v is None for v in given) or args.tau_star is None:
        raise DataError("Psi overlays need --tau-star, --theta-f, --theta-g and --rho")
    return DriftSpec(args.tau_star, args.theta_f, args.theta_g, args.rho)


def cmd_trajectory(args, out) -> int:
    if (args.input is None) == (args.config is None):
        raise DataError("give exactly one of --input and --config")
    drift = _drift_from_args(args)
    if args.config is not None:
        scenarios = load_scenarios(_read_text(args.config))
        bundle = trajectory_bundle(scenarios[0], drift=drift, replication=args.replication, mc=args.mc)
    else:
        kernel = builtin_kernel(args.kernel)
        x = as_series(read_table(args.input), kernel, min_n=4)
        diff = diff_processes(kernel, x)
        t = diff.k / diff.n
        dF, dL = diff.scaled("n")
        bundle = TrajectoryBundle(t, dF, dL)
        if drift is not None:
            bundle = TrajectoryBundle(t, dF, dL, psi1(t, drift), psi2(t, drift))
    out.write(bundle.to_csv())
    return EXIT_OK


def cmd_theory(args, out) -> int:
    kernel = builtin_kernel(args.kernel)
    f = parse_distribution(args.before)
    g = parse_distribution(args.after)
    triple = theta_mc(kernel, f, g, args.mc, args.seed)
    report = theory_report(kernel, triple, args.tau_star, args.grid)
    out.write(report.to_json() + "\n")
    if args.psi_csv:
        if report.psi is None:
            raise DataError("--psi-csv needs --grid")
        with open(args.psi_csv, "w", encoding="utf-8", newline="") as fh:
            fh.write(_psi_both_csv(report.psi))
    return EXIT_OK


def _psi_both_csv(grid: np.ndarray) -> str:
    lines = ["t,psi1,psi2"]
    lines += [",".join(repr(float(v)) for v in row) for row in grid]
    return "\n".join(lines) + "\n"


def cmd_simulate(args, out) -> int:
    scenarios = load_scenarios(_read_text(args.config))
    if args.runs is not None:
        scenarios = [replace(s, runs=args.runs) for s in scenarios]
    table = run_scenarios(scenarios, workers=args.workers)
    if args.out:
        with open(args.out, "w", encoding="utf-8", newline="") as fh:
            fh.write(table.to_csv())
    out.write(table.to_text() if not args.csv else table.to_csv())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="ucusum", description="U-statistic CUSUM change-point tests")
    sub = p.add_subparsers(dest="command", required=True)

    t = sub.add_parser("test", help="run the change-point tests on a CSV series")
    t.add_argument("--input", required=True)
    t.add_argument("--kernel", default="gmd")
    t.add_argument("--method", choices=("fvf", "fvl", "both"), default="both")
    t.add_argument("--bandwidth", type=_bandwidth, default="auto")
    t.add_argument("--variant", choices=("appendix_d", "intro_gmd"), default="appendix_d")
    fmt = t.add_mutually_exclusive_group()
    fmt.add_argument("--json", action="store_true", help="one JSON report per line (default)")
    fmt.add_argument("--text", action="store_true")
    t.set_defaults(func=cmd_test)

    tr = sub.add_parser("trajectory", help="emit D^F/n and D^L/n as CSV")
    tr.add_argument("--input")
    tr.add_argument("--config", help="scenario file; the first scenario is used")
    tr.add_argument("--replication", type=int, default=0)
    tr.add_argument("--kernel", default="gmd")
    tr.add_argument("--mc", type=int, default=1_000_000)
    tr.add_argument("--tau-star", type=float)
    tr.add_argument("--theta-f", type=float)
    tr.add_argument("--theta-g", type=float)
    tr.add_argument("--rho", type=float)
    tr.set_defaults(func=cmd_trajectory)

    th = sub.add_parser("theory", help="theta triple, power ranking and drift curves")
    th.add_argument("--kernel", default="gmd")
    th.add_argument("--before", required=True)
    th.add_argument("--after", required=True)
    th.add_argument("--mc", type=int, default=1_000_000)
    th.add_argument("--seed", type=int, default=0)
    th.add_argument("--tau-star", type=float, default=0.5)
    th.add_argument("--grid", type=int, help="number of grid points for Psi curves")
    th.add_argument("--psi-csv", help="write the Psi grid to this CSV file")
    th.set_defaults(func=cmd_theory)

    s = sub.add_parser("simulate", help="rejection frequencies for a scenario file")
    s.add_argument("--config", required=True)
    s.add_argument("--out", help="write the table as CSV")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--runs", type=int, help="override the number of runs")
    s.add_argument("--csv", action="store_true", help="print CSV instead of the text table")
    s.set_defaults(func=cmd_simulate)
    return p


def main(argv: Optional[List[str]] = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_DATA if exc.code else EXIT_OK
    try:
        return args.func(args, out)
    except DegenerateVarianceError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DEGENERATE
    except (UcusumError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
