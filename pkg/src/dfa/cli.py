"""``dfa`` command-line front end.

Subcommands::

    dfa normal-order EXPR
    dfa expect [--state vacuum|displaced[:K]|conj:EXPR] EXPR
    dfa table --family char|density --deformation NAME [params] [--grid MIN:MAX:STEPS]
    dfa table --figure 1|2
    dfa verify --suite algebra|positivity|bch|charfunc|fourier|tails|all

Exit codes: 0 success, 1 verification failure, 2 usage or parse error,
3 numerical non-convergence.  ``DFA_THREADS`` sets the number of worker
threads used for table evaluation.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from importlib import resources
from typing import Callable, Sequence

import numpy as np

from . import charfunc as cf
from .errors import DFAError, DomainError, NoiseFloorError, NonConvergenceError
from .model import ModelContext
from .parser import format_canonical, format_scalar, load_model, parse, parse_model
from .states import conjugated, displaced, expect, vacuum
from .verify import SUITES, run_suite

__all__ = ["RunConfig", "main", "build_parser", "cmd_normal_order", "cmd_expect", "cmd_table", "cmd_verify"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(DFAError, ValueError):
    """Invalid combination of command-line options."""


@dataclass(frozen=True)
class RunConfig:
    """Resolved options shared by the subcommands."""

    command: str
    model_path: str | None = None
    output_path: str | None = None
    grid: tuple | None = None
    tol: float | None = None
    order: int | None = None
    threads: int = 1

    def __post_init__(self):
        if self.grid is not None:
            lo, hi, steps = self.grid
            if steps < 2:
                raise UsageError("grid needs at least 2 points")
            if not hi > lo:
                raise UsageError("grid maximum must exceed its minimum")
        if self.tol is not None and not self.tol > 0:
            raise UsageError("tolerance must be positive")
        if self.order is not None and self.order < 0:
            raise UsageError("order must be non-negative")
        if self.threads < 1:
            raise UsageError("thread count must be at least 1")

    def grid_points(self, default: tuple) -> np.ndarray:
        lo, hi, steps = self.grid or default
        return np.linspace(lo, hi, int(steps))


def parse_grid(text: str) -> tuple:
    parts = text.split(":")
    if len(parts) != 3:
        raise argparse.ArgumentTypeError("grid must be MIN:MAX:STEPS")
    try:
        return float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed grid {text!r}") from None


def _number_list(text: str) -> list[float]:
    from fractions import Fraction

    try:
        return [float(Fraction(t.strip())) for t in text.split(",") if t.strip()]
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"malformed number list {text!r}") from None


def _complex_list(text: str) -> list[complex]:
    try:
        return [complex(t.strip().replace("i", "j")) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed complex list {text!r}") from None


def _int_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"malformed integer list {text!r}") from None


def default_model() -> ModelContext:
    """The bundled two-function model."""
    text = resources.files("dfa").joinpath("data/bundled_model.json").read_text(encoding="utf-8")
    return parse_model(text)


def _load(config: RunConfig) -> ModelContext:
    return load_model(config.model_path) if config.model_path else default_model()


def _threads() -> int:
    raw = os.environ.get("DFA_THREADS")
    if raw is None:
        return 1
    try:
        return max(1, int(raw))
    except ValueError:
        raise UsageError(f"DFA_THREADS must be an integer, got {raw!r}") from None


def _emit(text: str, path: str | None):
    if path:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


# -- commands -------------------------------------------------------------------

def cmd_normal_order(model: ModelContext, expr: str) -> str:
    return format_canonical(parse(expr, model))


def _state(model: ModelContext, spec: str):
    if spec == "vacuum":
        return vacuum()
    if spec == "displaced" or spec.startswith("displaced:"):
        k = spec.partition(":")[2] or "1"
        from fractions import Fraction

        try:
            return displaced(model, k=Fraction(k))
        except (ValueError, ZeroDivisionError):
            raise UsageError(f"invalid displacement power {k!r}") from None
    if spec.startswith("conj:"):
        return conjugated(parse(spec[5:], model))
    raise UsageError(f"unknown state {spec!r}; use vacuum, displaced[:K] or conj:EXPR")


def scalar_text(c) -> str:
    sign, mag = format_scalar(c)
    return mag if sign > 0 else "-" + mag


def cmd_expect(model: ModelContext, state_spec: str, expr: str) -> str:
    return scalar_text(expect(_state(model, state_spec), parse(expr, model)))


@dataclass(frozen=True)
class Column:
    label: str
    fn: Callable


def table_columns(family: str, deformation: str, ff: float, *, alphas=(0.0,), ks=(1,), zeta=0.5,
                  xi=(1.0,), gaussian: bool = False) -> list[Column]:
    """Columns for :func:`cmd_table`; each maps a grid array to values."""
    if not ff > 0:
        raise UsageError("ff must be positive")
    cols: list[Column] = []
    if gaussian:
        cols.append(Column(f"gaussian[var={ff:g}]", (lambda g: lambda x: g(x, ff))(
            cf.char_free if family == "char" else cf.dens_free)))
    char = family == "char"
    if deformation == "free":
        cols.append(Column("free", (lambda l: cf.char_free(l, ff)) if char else (lambda x: cf.dens_free(x, ff))))
    elif deformation == "displaced":
        cols.append(Column(f"displaced[zeta={zeta:g}]", (lambda l: cf.char_displaced(l, ff, zeta)) if char
                           else (lambda x: cf.dens_displaced(x, ff, zeta))))
    elif deformation == "mixture":
        xi = list(xi)
        cols.append(Column("mixture", (lambda l: cf.char_mixture(l, ff, zeta, xi)) if char
                           else (lambda x: cf.dens_mixture(x, ff, zeta, xi))))
    elif deformation == "defI":
        for al in alphas:
            aa = abs(al)
            cols.append(Column(f"defI[|alpha|={aa:g}]", (lambda aa: (lambda l: cf.char_defI(l, ff, aa)) if char
                                                          else (lambda x: cf.dens_defI(x, ff, aa)))(aa)))
    elif deformation == "defI_power":
        if not char:
            raise UsageError("densities for defI_power are not available in closed form")
        for k in ks:
            for al in alphas:
                cols.append(Column(f"defI_power[k={k},alpha={al:g}]",
                                   (lambda k, al: lambda l: cf.char_defI_power(l, ff, al, k))(k, al)))
    elif deformation == "defII":
        for k in ks:
            if char:
                if not 1 <= k <= 6:
                    raise UsageError("defII characteristic functions need 1 <= k <= 6")
                cols.append(Column(f"defII[k={k}]", (lambda k: lambda l: cf.char_defII_power(l, ff, k))(k)))
            elif k == 1:
                cols.append(Column("defII[k=1]", lambda x: cf.dens_defII(x, ff)))
            elif k == 2:
                cols.append(Column("defII[k=2]", lambda x: cf.dens_defII_k2(x, ff)))
            else:
                raise UsageError("defII densities are available for k = 1, 2")
    else:
        raise UsageError(f"unknown deformation {deformation!r}")
    return cols


FIGURES = {
    "1": dict(family="density", deformation="defI", alphas=(0.0, 1 / 3, 1.0, 3.0)),
    "2": dict(family="density", deformation="defII", ks=(1, 2), gaussian=True),
}


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def cmd_table(config: RunConfig, family: str, columns: Sequence[Column]) -> str:
    """CSV text with the grid in the first column and one column per parameter set.

    Characteristic functions get ``.re`` and ``.im`` columns.  Rows are in grid
    order; worker threads evaluate columns independently and are collected in
    column order, so the output does not depend on the thread count.
    """
    if family not in ("char", "density"):
        raise UsageError("family must be char or density")
    grid = config.grid_points((-4.0, 4.0, 81) if family == "char" else (-6.0, 6.0, 121))
    with ThreadPoolExecutor(max_workers=config.threads) as pool:
        values = list(pool.map(lambda c: np.asarray(c.fn(grid)), columns))
    header = ["lambda" if family == "char" else "x"]
    data = [grid]
    for col, v in zip(columns, values):
        if family == "char":
            v = v.astype(complex)
            header += [f"{col.label}.re", f"{col.label}.im"]
            data += [v.real, v.imag]
        else:
            header.append(col.label)
            data.append(v.astype(float))
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\r\n")
    w.writerow(header)
    for row in zip(*data):
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def cmd_verify(model: ModelContext, suite: str, tol: float | None = None, order: int | None = None):
    """Run a suite; returns ``(report_dict, summary_text)``."""
    rep = run_suite(suite, model, tol=tol, order=order)
    return rep.to_dict(), rep.summary()


# -- argument parsing -------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--model", metavar="PATH", help="JSON model file (default: bundled two-function model)")
    common.add_argument("--out", metavar="PATH", help="write output here instead of stdout")
    common.add_argument("--tol", type=float, help="numerical tolerance")
    common.add_argument("--order", type=int, help="truncation or moment order")

    p = argparse.ArgumentParser(prog="dfa", description="Displacement-operator field algebra tools.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("normal-order", parents=[common], help="print the canonical form of an expression")
    s.add_argument("expr")

    s = sub.add_parser("expect", parents=[common], help="evaluate a state on an expression")
    s.add_argument("expr")
    s.add_argument("--state", default="vacuum", help="vacuum, displaced[:K] or conj:EXPR")

    s = sub.add_parser("table", parents=[common], help="tabulate characteristic functions or densities as CSV")
    s.add_argument("--family", choices=("char", "density"))
    s.add_argument("--deformation", choices=("free", "displaced", "mixture", "defI", "defI_power", "defII"))
    s.add_argument("--figure", choices=sorted(FIGURES), help="reproduce the data of a figure")
    s.add_argument("--ff", type=float, default=1.0, help="(f, f)")
    s.add_argument("--alpha", type=_number_list, default=[0.5], help="comma-separated alpha values")
    s.add_argument("--k", type=_int_list, default=[1], help="comma-separated powers")
    s.add_argument("--zeta", type=float, default=0.5, help="zeta(f)")
    s.add_argument("--xi", type=_complex_list, default=[1.0], help="mixture coefficients xi_0, xi_1, ...")
    s.add_argument("--gaussian", action="store_true", help="add a Gaussian column of variance ff")
    s.add_argument("--grid", type=parse_grid, help="MIN:MAX:STEPS")

    s = sub.add_parser("verify", parents=[common], help="run a verification suite and emit a JSON report")
    s.add_argument("--suite", choices=SUITES, default="all")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE
    try:
        config = RunConfig(
            command=args.command,
            model_path=args.model,
            output_path=args.out,
            grid=getattr(args, "grid", None),
            tol=args.tol,
            order=args.order,
            threads=_threads(),
        )
        if args.command == "normal-order":
            _emit(cmd_normal_order(_load(config), args.expr) + "\n", config.output_path)
        elif args.command == "expect":
            _emit(cmd_expect(_load(config), args.state, args.expr) + "\n", config.output_path)
        elif args.command == "table":
            if args.figure:
                spec = dict(FIGURES[args.figure])
                family = spec.pop("family")
                cols = table_columns(family, spec.pop("deformation"), args.ff, **spec)
            else:
                if not args.family or not args.deformation:
                    raise UsageError("table needs --family and --deformation, or --figure")
                family = args.family
                cols = table_columns(family, args.deformation, args.ff, alphas=args.alpha, ks=args.k,
                                     zeta=args.zeta, xi=args.xi, gaussian=args.gaussian)
            _emit(cmd_table(config, family, cols), config.output_path)
        elif args.command == "verify":
            report, summary = cmd_verify(_load(config), args.suite, config.tol, config.order)
            _emit(json.dumps(report, indent=2) + "\n", config.output_path)
            print(summary, file=sys.stderr)
            return EXIT_OK if report["passed"] else EXIT_FAIL
    except (NonConvergenceError, NoiseFloorError, DomainError) as e:
        print(f"dfa: numerical failure: {e}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DFAError, OSError) as e:
        print(f"dfa: error: {e}", file=sys.stderr)
        return EXIT_USAGE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
