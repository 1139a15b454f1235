"""
Command-line entry point: ``mahlerlab {verify, measure, lvalue, scan}``.

Exit codes: 0 pass, 1 tolerance failure, 2 configuration or input error, 3 numerical non-convergence.
"""

import argparse
import sys
from typing import Dict, List, Optional

import numpy as np
import pandas as pd
from loguru import logger

from mahlerlab import DEFAULT_CONFIG_PATH, __version__
from mahlerlab import lfunc
from mahlerlab.exceptions import ConfigurationError, MahlerlabError, NonConvergence
from mahlerlab.lfunc import CurveTable, DirichletChar
from mahlerlab.mahler import mahler_2d_grid, mahler_jensen
from mahlerlab.polyfam import DEGENERATE_PARAMETERS, Family, family_polynomial
from mahlerlab.utils import ConfigLoader, setup_logging
from mahlerlab.utils.io import write_report_csv, write_report_json, write_scan_csv
from mahlerlab.verify import SUITE_ORDER, exit_code, generate_report, print_rows, rows_to_frame, run_suite

FAMILIES = [f.value for f in Family]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="mahlerlab",
        description="Mahler measures of two-variable polynomial families and the identities between them.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--config", default=None, help="YAML configuration (default: config/main.yml)")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="compute both sides of every identity in a suite")
    verify.add_argument("--suite", default="all", choices=[*SUITE_ORDER, "all"])
    verify.add_argument("--tol", type=float, default=None, help="override every per-class tolerance")
    verify.add_argument("--csv", default=None, help="write the report as CSV")
    verify.add_argument("--json", default=None, help="write the report as a JSON array")
    verify.add_argument("--jobs", type=int, default=1, help="worker processes")
    verify.add_argument("--deterministic", action="store_true", help="zero the wall times in the report")

    measure = sub.add_parser("measure", help="Mahler measure of one family member")
    measure.add_argument("--family", required=True, help=f"one of {FAMILIES}")
    measure.add_argument("--k", type=float, required=True)
    measure.add_argument("--method", choices=["jensen", "grid2d"], default="jensen")
    measure.add_argument("--tol", type=float, default=None)
    measure.add_argument("--n", type=int, default=512, help="grid size for grid2d")

    lvalue = sub.add_parser("lvalue", help="L'(E, 0) of a tabulated curve or L'(chi, -1)")
    target = lvalue.add_mutually_exclusive_group(required=True)
    target.add_argument("--curve", help="curve label from curves.json")
    target.add_argument("--chi", type=int, choices=[-3, -4], help="character discriminant")

    scan = sub.add_parser("scan", help="tabulate m(F_k) over a parameter range")
    scan.add_argument("--family", required=True, help=f"one of {FAMILIES}")
    scan.add_argument("--k-min", type=float, required=True)
    scan.add_argument("--k-max", type=float, required=True)
    scan.add_argument("--steps", type=int, default=101)
    scan.add_argument("--tol", type=float, default=None)
    scan.add_argument("--csv", required=True)
    scan.add_argument("--plot", default=None, help="directory for a pdf/png rendering of the scan")
    return parser


def _family(name: str) -> Family:
    try:
        return Family(name)
    except ValueError as e:
        raise ConfigurationError(f"Unknown family: {name} (expected one of {FAMILIES})") from e


def _quadrature_tol(args: argparse.Namespace, config: Dict) -> float:
    if args.tol is not None:
        return args.tol
    return float((config.get("quadrature") or {}).get("tol", 1e-10))


def cmd_verify(args: argparse.Namespace, config: Dict) -> int:
    if args.jobs < 1:
        raise ConfigurationError(f"--jobs must be at least 1, got {args.jobs}")
    deterministic = args.deterministic or not (config.get("report") or {}).get("record_wall_time", True)
    rows = run_suite(args.suite, config, tol=args.tol, jobs=args.jobs, deterministic=deterministic)
    print_rows(rows)
    generate_report(args.suite, rows, args.tol, args.jobs)
    if args.csv or args.json:
        frame = rows_to_frame(rows)
        if args.csv:
            write_report_csv(frame, args.csv)
        if args.json:
            write_report_json(frame, args.json)
    return exit_code(rows)


def _measure(family: Family, k: float, tol: float, method: str = "jensen", n: int = 512):
    polynomial = family_polynomial(family, k)
    if method == "grid2d":
        return mahler_2d_grid(polynomial, n), float("nan"), True
    result = mahler_jensen(polynomial, tol=tol)
    return result.value, result.error_estimate, result.converged


def cmd_measure(args: argparse.Namespace, config: Dict) -> int:
    family = _family(args.family)
    value, error, converged = _measure(family, args.k, _quadrature_tol(args, config), args.method, args.n)
    print(f"m({family.value}, k={args.k:g}) = {value:.15f}  error estimate {error:.2e}  [{args.method}]")
    return 0 if converged else 3


def cmd_lvalue(args: argparse.Namespace, config: Dict) -> int:
    if args.curve is not None:
        curves_file = (config.get("lfunc") or {}).get("curves_file", lfunc.CURVES_FILE)
        curve = CurveTable.load(filename=curves_file).by_label(args.curve)
        print(f"L'({curve.label}, 0) = {lfunc.Lprime_E_0(curve):.15f}  (N = {curve.conductor})")
    else:
        chi = DirichletChar.from_discriminant(args.chi)
        print(f"L'(chi_{args.chi}, -1) = {lfunc.Lprime_chi_minus1(chi):.15f}")
    return 0


def cmd_scan(args: argparse.Namespace, config: Dict) -> int:
    family = _family(args.family)
    if args.steps < 2 or not args.k_min < args.k_max:
        raise ConfigurationError("scan needs --steps >= 2 and --k-min < --k-max")
    tol = _quadrature_tol(args, config)
    records: List[Dict] = []
    for k in np.linspace(args.k_min, args.k_max, args.steps):
        try:
            value, error, converged = _measure(family, float(k), tol)
        except MahlerlabError as e:
            logger.warning(f"scan point k={k:g} skipped: {type(e).__name__}: {e}")
            continue
        if not converged:
            logger.warning(f"scan point k={k:g} did not converge (error estimate {error:.2e})")
        records.append({"k": float(k), "m": value, "error": error})
    scan = pd.DataFrame(records, columns=["k", "m", "error"])
    write_scan_csv(scan, args.csv)
    if args.plot:
        from mahlerlab.utils.plot import save_to, scan_plot

        scan_plot(scan, family.value, breakpoints=DEGENERATE_PARAMETERS.get(family, ()))
        save_to(args.plot, f"scan_{family.value}")
    return 0


COMMANDS = {
    "verify": cmd_verify,
    "measure": cmd_measure,
    "lvalue": cmd_lvalue,
    "scan": cmd_scan,
}


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = ConfigLoader(args.config or DEFAULT_CONFIG_PATH).config
        setup_logging(**(config.get("logging") or {}))
        logger.info(f"mahlerlab {__version__}: {args.command}")
        return COMMANDS[args.command](args, config)
    except ConfigurationError as e:
        logger.error(f"Configuration error: {e}")
        return 2
    except NonConvergence as e:
        logger.error(f"Numerical non-convergence: {e}")
        return 3
    except MahlerlabError as e:
        logger.error(f"{type(e).__name__}: {e}")
        return 2


if __name__ == "__main__":
    sys.exit(main())
