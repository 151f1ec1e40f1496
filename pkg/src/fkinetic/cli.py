"""Command-line front end: closed-form sweeps, oracle verification, (t, alpha) grids.

Subcommands::

    fkinetic solve   long table, one row per (alpha, t) cell
    fkinetic grid    wide table, one row per t and one column per alpha
    fkinetic verify  closed form vs numerical oracle, per (alpha, mode) cell

Exit codes: 0 success, 2 validation error, 3 verification failure, 4 IO error.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .closed_form import GammaMode, build_solution, eval_solution
from .errors import FKineticError, OutputError, SingularEvaluation, ValidationError
from .oracle import OracleConfig, solve_numeric
from .problem import KineticProblem, Variant
from .special_functions import DEFAULT_POLICY, AccuracyPolicy
from .srivastava import SrivastavaPoly, load_poly, make_poly

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_VERIFY_FAILED = 3
EXIT_IO = 4

COLUMNS = ("variant", "gamma_mode", "alpha", "lambda", "c", "d", "t", "N")
TABLE_T_START = 0.0
TABLE_T_END = 4.0
TABLE_T_STEPS = 21
TABLE_ALPHAS = (0.1, 0.5, 0.9, 1.3)
DEFAULT_H = 2.0**-11
DEFAULT_TOL = 5e-3


@dataclass(frozen=True)
class SweepSpec:
    """A (t, alpha) sweep of one problem template."""

    t_start: float
    t_end: float
    t_steps: int
    alphas: tuple[float, ...]
    variant: Variant
    n0: float
    c: float
    poly: SrivastavaPoly
    d: float | None = None
    lam: float = 0.0
    gamma_modes: tuple[GammaMode, ...] = (GammaMode.DERIVED,)
    fmt: str = "csv"
    placeholder: str = "nan"
    policy: AccuracyPolicy = field(default=DEFAULT_POLICY)

    def __post_init__(self):
        if not (math.isfinite(self.t_start) and math.isfinite(self.t_end)):
            raise ValidationError("t range must be finite")
        if self.t_start < 0:
            raise ValidationError(f"t_start must be >= 0, got {self.t_start}")
        if not self.t_end > self.t_start:
            raise ValidationError("t_end must exceed t_start")
        if int(self.t_steps) != self.t_steps or self.t_steps < 1:
            raise ValidationError(f"t_steps must be a positive integer, got {self.t_steps}")
        if not self.alphas:
            raise ValidationError("at least one alpha is required")
        if not all(math.isfinite(a) and a > 0 for a in self.alphas):
            raise ValidationError("every alpha must be finite and > 0")
        if not self.gamma_modes:
            raise ValidationError("at least one gamma mode is required")
        if self.fmt not in ("csv", "json"):
            raise ValidationError(f"unknown output format {self.fmt!r}")
        # surfaces field errors before any cell is evaluated
        self.problem(self.alphas[0])

    @property
    def times(self) -> list[float]:
        if self.t_steps == 1:
            return [self.t_start]
        span = self.t_end - self.t_start
        last = self.t_steps - 1
        return [self.t_start + i * span / last for i in range(self.t_steps)]

    def problem(self, alpha: float) -> KineticProblem:
        return KineticProblem(
            self.variant, self.n0, alpha, self.c, self.poly, d=self.d, lam=self.lam
        )


def _row(spec, mode, alpha, t, value):
    return {
        "variant": spec.variant.name,
        "gamma_mode": mode.value,
        "alpha": alpha,
        "lambda": spec.lam,
        "c": spec.c,
        "d": spec.d,
        "t": t,
        "N": value,
    }


def _cell_values(spec, mode, alpha):
    sol = build_solution(spec.problem(alpha), mode)
    out = []
    for t in spec.times:
        try:
            out.append(eval_solution(sol, t, spec.policy))
        except SingularEvaluation:
            out.append(None)
    return out


def run_solve(spec: SweepSpec) -> list[dict]:
    """Long-format rows ordered by gamma mode, then alpha, then t."""
    rows = []
    for mode in spec.gamma_modes:
        for alpha in spec.alphas:
            for t, value in zip(spec.times, _cell_values(spec, mode, alpha)):
                rows.append(_row(spec, mode, alpha, t, value))
    return rows


@dataclass(frozen=True)
class Grid:
    """Dense (t, alpha) mesh of N for one gamma mode."""

    mode: GammaMode
    times: tuple[float, ...]
    alphas: tuple[float, ...]
    values: tuple[tuple[float | None, ...], ...]  # values[i][j] = N(times[i]; alphas[j])

    @property
    def shape(self):
        return len(self.times), len(self.alphas)


def run_grid(spec: SweepSpec) -> list[Grid]:
    grids = []
    for mode in spec.gamma_modes:
        columns = [_cell_values(spec, mode, alpha) for alpha in spec.alphas]
        values = tuple(tuple(col[i] for col in columns) for i in range(spec.t_steps))
        grids.append(Grid(mode, tuple(spec.times), tuple(spec.alphas), values))
    return grids


@dataclass(frozen=True)
class VerifyCell:
    variant: str
    gamma_mode: str
    alpha: float
    lam: float
    c: float
    d: float | None
    h: float
    max_abs_dev: float
    max_rel_dev: float
    passed: bool


@dataclass(frozen=True)
class VerifyReport:
    cells: tuple[VerifyCell, ...]
    tol: float

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.cells)


def compare_to_oracle(problem, mode, cfg, policy=DEFAULT_POLICY):
    """``(max_abs, max_rel, times, closed, numeric)`` over nodes >= t_eval_min_index.

    The relative deviation is max|closed - numeric| / max|closed| over the
    same nodes; pointwise ratios are meaningless where N crosses zero.
    """
    curve = solve_numeric(problem, cfg)
    sol = build_solution(problem, mode)
    times = curve.times[cfg.t_eval_min_index:]
    numeric = curve.values[cfg.t_eval_min_index:]
    closed = np.array([eval_solution(sol, float(t), policy) for t in times])
    dev = np.abs(closed - numeric)
    max_abs = float(dev.max()) if dev.size else 0.0
    scale = float(np.abs(closed).max()) if dev.size else 0.0
    max_rel = max_abs / scale if scale > 0 else (0.0 if max_abs == 0 else math.inf)
    return max_abs, max_rel, times, closed, numeric


def run_verify(
    spec: SweepSpec,
    cfg: OracleConfig | None = None,
    tol: float = DEFAULT_TOL,
    h: float = DEFAULT_H,
    workers: int = 1,
) -> VerifyReport:
    """Closed form vs oracle on (0, t_end] for every (mode, alpha) cell."""
    if cfg is None:
        cfg = OracleConfig.covering(spec.t_end, h)
    if cfg.n_steps <= cfg.t_eval_min_index:
        raise ValidationError("oracle grid has no nodes beyond t_eval_min_index")
    cells = [(mode, alpha) for mode in spec.gamma_modes for alpha in spec.alphas]

    def one(cell):
        mode, alpha = cell
        max_abs, max_rel, *_ = compare_to_oracle(spec.problem(alpha), mode, cfg, spec.policy)
        return VerifyCell(
            spec.variant.name, mode.value, alpha, spec.lam, spec.c, spec.d, cfg.h,
            max_abs, max_rel, bool(max_rel <= tol),
        )

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, cells))
    else:
        results = [one(cell) for cell in cells]
    return VerifyReport(tuple(results), tol)


# ---- serialization ---------------------------------------------------------

def _fmt(value, placeholder="nan"):
    if value is None:
        return placeholder
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (float, int, np.floating)):
        value = float(value)
        if math.isnan(value):
            return placeholder
        return format(value, ".17g")
    return str(value)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def emit(rows, fmt="csv", placeholder="nan") -> bytes:
    """Serialize long-format rows. Empty CSV input gives the header line alone."""
    if fmt == "csv":
        # a missing d (T1/T3) is an empty field; only N carries the placeholder
        body = [[_fmt(r[k], placeholder if k == "N" else "") for k in COLUMNS] for r in rows]
        return _csv_text(COLUMNS, body).encode()
    if fmt == "json":
        out = []
        for r in rows:
            obj = {k: r[k] for k in COLUMNS}
            if obj["N"] is None or (isinstance(obj["N"], float) and math.isnan(obj["N"])):
                obj["N"] = placeholder
            out.append(obj)
        return (json.dumps(out, indent=1) + "\n").encode()
    raise ValidationError(f"unknown output format {fmt!r}")


def parse_csv(data, placeholder="nan") -> list[dict]:
    """Inverse of :func:`emit` for CSV output."""
    text = data.decode() if isinstance(data, bytes) else data
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if tuple(header or ()) != COLUMNS:
        raise ValidationError(f"unexpected CSV header {header!r}")
    rows = []
    for rec in reader:
        row = dict(zip(COLUMNS, rec))
        for k in ("alpha", "lambda", "c", "t"):
            row[k] = float(row[k])
        row["d"] = float(row["d"]) if row["d"] != "" else None
        row["N"] = None if row["N"] == placeholder else float(row["N"])
        rows.append(row)
    return rows


def _alpha_label(alpha):
    return f"alpha={alpha!r}"


def emit_grid(grids, fmt="csv", placeholder="nan") -> bytes:
    """One table per gamma mode: column ``t`` plus one column per alpha.

    Several modes in CSV are separated by a blank line, each preceded by a
    ``# gamma_mode=...`` line.
    """
    if fmt == "csv":
        chunks = []
        for g in grids:
            header = ["t"] + [_alpha_label(a) for a in g.alphas]
            body = [[_fmt(t)] + [_fmt(v, placeholder) for v in row]
                    for t, row in zip(g.times, g.values)]
            text = _csv_text(header, body)
            if len(grids) > 1:
                text = f"# gamma_mode={g.mode.value}\n" + text
            chunks.append(text)
        return "\n".join(chunks).encode()
    if fmt == "json":
        out = []
        for g in grids:
            rows = []
            for t, row in zip(g.times, g.values):
                obj = {"t": t}
                for a, v in zip(g.alphas, row):
                    obj[_alpha_label(a)] = placeholder if v is None else v
                rows.append(obj)
            out.append({"gamma_mode": g.mode.value, "alphas": list(g.alphas), "rows": rows})
        return (json.dumps(out, indent=1) + "\n").encode()
    raise ValidationError(f"unknown output format {fmt!r}")


VERIFY_COLUMNS = ("variant", "gamma_mode", "alpha", "lambda", "c", "d", "h",
                  "max_abs_dev", "max_rel_dev", "tol", "pass")


def emit_report(report: VerifyReport, fmt="csv") -> bytes:
    rows = [
        (c.variant, c.gamma_mode, c.alpha, c.lam, c.c, c.d, c.h,
         c.max_abs_dev, c.max_rel_dev, report.tol, c.passed)
        for c in report.cells
    ]
    if fmt == "csv":
        body = [[_fmt(v, "") for v in r] for r in rows]
        return _csv_text(VERIFY_COLUMNS, body).encode()
    if fmt == "json":
        objs = [dict(zip(VERIFY_COLUMNS, r)) for r in rows]
        return (json.dumps({"passed": report.passed, "cells": objs}, indent=1) + "\n").encode()
    raise ValidationError(f"unknown output format {fmt!r}")


def write_output(data: bytes, out: str | None):
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.buffer.flush()
        return
    try:
        Path(out).write_bytes(data)
    except OSError as exc:
        raise OutputError(out, exc.strerror or str(exc)) from exc


# ---- argument handling -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fkinetic",
        description="Fractional kinetic equations with Srivastava-polynomial forcing.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--theorem", type=int, choices=(1, 2, 3, 4), default=1,
                        help="equation variant T1..T4 (default 1)")
    common.add_argument("--alpha", type=float, action="append",
                        help="fractional order; repeat for several (default 1)")
    common.add_argument("--c", type=float, default=1.0, help="rate / argument scale c")
    common.add_argument("--d", type=float, default=None, help="decay constant d (T2, T4)")
    common.add_argument("--lambda", dest="lam", type=float, default=0.0,
                        help="derivative order lambda in [0, 1) (T3, T4)")
    common.add_argument("--n0", type=float, default=1.0, help="N0 (default 1)")
    common.add_argument("--poly", help='JSON file {"w":..,"p":..,"coefficients":[..]}; '
                                       "default w=0, p=1, coefficients=[1]")
    common.add_argument("--t-start", type=float, default=None)
    common.add_argument("--t-end", type=float, default=None)
    common.add_argument("--t-steps", type=int, default=None,
                        help="number of t points, endpoints included")
    common.add_argument("--table-grid", action="store_true",
                        help="t = 0, 0.2, ..., 4 and alpha in {0.1, 0.5, 0.9, 1.3}")
    common.add_argument("--gamma-mode", choices=("derived", "literal"), action="append",
                        help="Gamma factor of the T1/T3 series; repeatable (default derived)")
    common.add_argument("--format", dest="fmt", choices=("csv", "json"), default="csv")
    common.add_argument("--out", default=None, help="output file (default stdout)")
    common.add_argument("--placeholder", default="nan",
                        help="text for cells that are singular (t = 0 with lambda > 0)")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("solve", parents=[common], help="long table of N(t) per alpha")
    sub.add_parser("grid", parents=[common], help="wide (t x alpha) table")
    verify = sub.add_parser("verify", parents=[common],
                            help="compare the closed form with the numerical oracle")
    verify.add_argument("--h", type=float, default=DEFAULT_H, help="oracle step (default 2^-11)")
    verify.add_argument("--tol", type=float, default=DEFAULT_TOL,
                        help="max relative deviation per cell (default 5e-3)")
    verify.add_argument("--t-eval-min-index", type=int, default=10)
    verify.add_argument("--jobs", type=int, default=1, help="cells evaluated concurrently")
    return parser


def spec_from_args(args) -> SweepSpec:
    if args.poly:
        try:
            poly = load_poly(args.poly)
        except OSError as exc:
            raise OutputError(args.poly, exc.strerror or str(exc)) from exc
    else:
        poly = make_poly(0, 1, [1.0])
    if args.table_grid:
        t_start, t_end, t_steps = TABLE_T_START, TABLE_T_END, TABLE_T_STEPS
        alphas = tuple(args.alpha) if args.alpha else TABLE_ALPHAS
    else:
        t_start, t_end, t_steps = 0.0, 1.0, 11
        alphas = tuple(args.alpha) if args.alpha else (1.0,)
    if args.t_start is not None:
        t_start = args.t_start
    if args.t_end is not None:
        t_end = args.t_end
    if args.t_steps is not None:
        t_steps = args.t_steps
    modes = tuple(GammaMode.parse(m) for m in dict.fromkeys(args.gamma_mode or ["derived"]))
    return SweepSpec(
        t_start=t_start, t_end=t_end, t_steps=t_steps, alphas=alphas,
        variant=Variant(args.theorem), n0=args.n0, c=args.c, poly=poly,
        d=args.d, lam=args.lam, gamma_modes=modes, fmt=args.fmt,
        placeholder=args.placeholder,
    )


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        spec = spec_from_args(args)
        if args.command == "solve":
            data = emit(run_solve(spec), spec.fmt, spec.placeholder)
        elif args.command == "grid":
            data = emit_grid(run_grid(spec), spec.fmt, spec.placeholder)
        else:
            cfg = OracleConfig.covering(spec.t_end, args.h, args.t_eval_min_index)
            report = run_verify(spec, cfg, tol=args.tol, workers=args.jobs)
            data = emit_report(report, spec.fmt)
        write_output(data, args.out)
    except OutputError as exc:
        print(f"fkinetic: error: {exc}", file=sys.stderr)
        return EXIT_IO
    except FKineticError as exc:
        print(f"fkinetic: error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    if args.command == "verify" and not report.passed:
        for cell in report.cells:
            if not cell.passed:
                print(
                    f"fkinetic: verify failed: {cell.variant} {cell.gamma_mode} "
                    f"alpha={cell.alpha!r} max_rel_dev={cell.max_rel_dev:.3e} > {args.tol:g}",
                    file=sys.stderr,
                )
        return EXIT_VERIFY_FAILED
    return EXIT_OK


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
