"""Command-line front end.

Exit status: 0 success, 1 invalid input or configuration, 2 numerical failure.
``SQOTTO_WORKERS`` sets the sweep thread count.
"""

from __future__ import annotations

import argparse
import sys

from . import hpz
from .config import PRESETS, RunConfig, load_config, parse_grid
from .cycle import REPORT_COLUMNS, run_cycle, sweep
from .errors import ConfigError, DomainError, NumericError
from .figures import COV_COLUMNS, R_DRIVING_COLUMNS, cov_rows, r_driving_rows
from .output import emit_report

EXIT_OK, EXIT_INVALID, EXIT_NUMERIC = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not numeric ones
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


def _grid_arg(text):
    try:
        return parse_grid(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _tol_arg(text):
    try:
        v = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}") from None
    if not 0 < v < 1:
        raise argparse.ArgumentTypeError("tolerance must be in (0, 1)")
    return v


def _common(p):
    p.add_argument("--format", choices=("csv", "json"), default=None, help="output format (default: config or csv)")
    p.add_argument("--out", default=None, help="output file (default: config or stdout)")
    p.add_argument("--tol", type=_tol_arg, default=None, help="ramp integrator relative tolerance")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="sqotto", description="Quantum Otto engine with a squeezed hot bath.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("cycle", help="run one cycle and report energies, works, heats and efficiency")
    p.add_argument("config")
    _common(p)

    p = sub.add_parser("sweep", help="run cycles over the [sweep] grid")
    p.add_argument("config")
    _common(p)

    p = sub.add_parser("fig", help="emit figure data")
    figs = p.add_subparsers(dest="figure", required=True, parser_class=_Parser)
    q = figs.add_parser("r-driving", help="end-of-ramp squeeze vs ramp duration")
    q.add_argument("--config", default="r-driving", help=f"config file or preset ({', '.join(PRESETS)})")
    q.add_argument("--tau-grid", type=_grid_arg, default=None)
    _common(q)
    q = figs.add_parser("cov", help="late-time covariances vs coupling and temperature")
    q.add_argument("--config", default="cov", help=f"config file or preset ({', '.join(PRESETS)})")
    q.add_argument("--gamma-grid", type=_grid_arg, default=None)
    q.add_argument("--temp-grid", type=_grid_arg, default=None)
    _common(q)

    p = sub.add_parser("hpz-dump", help="master-equation coefficients over the [hpz] grid")
    p.add_argument("config")
    _common(p)
    return ap


def _settings(args, rc: RunConfig):
    return (args.format or rc.fmt, args.out if args.out is not None else rc.out,
            args.tol if args.tol is not None else rc.tol)


def _numeric_failures(rows):
    return any(str(r.get("status", "")).startswith(NumericError.__name__) for r in rows)


def _run(args) -> int:
    cmd = args.command
    rc = load_config(args.config)
    fmt, out, tol = _settings(args, rc)

    if cmd == "cycle":
        rep = run_cycle(rc.engine, tol)
        emit_report(rep.as_row(), REPORT_COLUMNS, fmt, out)
        return EXIT_OK

    if cmd == "sweep":
        if not rc.sweep:
            raise ConfigError("sweep needs at least one axis in the [sweep] section")
        axes = {k: list(g) for k, g in rc.sweep.items()}
        rows = []
        for r in sweep(rc.engine, axes, tol=tol):
            row = {"index": r.index, **r.params}
            if r.report is not None:
                row.update(r.report.as_row())
            row["status"] = r.status
            rows.append(row)
        columns = ("index", *axes, *REPORT_COLUMNS, "status")
        emit_report(rows, columns, fmt, out)
        return EXIT_NUMERIC if _numeric_failures(rows) else EXIT_OK

    if cmd == "fig":
        if args.figure == "r-driving":
            taus = args.tau_grid or rc.fig["tau_grid"]
            rows = r_driving_rows(rc.engine, list(taus), tol)
            emit_report(rows, R_DRIVING_COLUMNS, fmt, out)
        else:
            gammas = args.gamma_grid or rc.fig["gamma_grid"]
            temps = args.temp_grid or rc.fig["temp_grid"]
            rows = cov_rows(list(gammas), list(temps), mass=rc.engine.mass, omega=rc.engine.omega_l,
                            cutoff=rc.engine.cutoff_l)
            emit_report(rows, COV_COLUMNS, fmt, out)
        return EXIT_NUMERIC if _numeric_failures(rows) else EXIT_OK

    if cmd == "hpz-dump":
        h = rc.hpz
        rows = hpz.coefficient_table(list(h["betas"]), list(h["etas"]), list(h["gammas"]), mass=h["mass"],
                                     omega=h["omega"], cutoff=h["cutoff"], theta=h["theta"], t=h["t"])
        emit_report(rows, hpz.COEFFICIENT_COLUMNS, fmt, out)
        return EXIT_NUMERIC if _numeric_failures(rows) else EXIT_OK
    raise AssertionError(cmd)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _run(args)
    except (ConfigError, DomainError) as exc:
        print(f"sqotto: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except NumericError as exc:
        where = f" (last good t={exc.last_good!r})" if getattr(exc, "last_good", None) is not None else ""
        print(f"sqotto: numerical failure: {exc}{where}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"sqotto: {exc}", file=sys.stderr)
        return EXIT_INVALID
