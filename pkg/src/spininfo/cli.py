"""Command-line front end: evaluate measurements, scan the information and bound
curves, run the constrained maximization, and validate measurement files.

Exit codes: 0 success, 1 invalid input or POVM, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import __version__
from .catalog import CATALOG_NAMES, build_named
from .geometry import ANTIPARALLEL, ENSEMBLE_KINDS
from .information import (
    InfoReport,
    bound_theta,
    info_theta_batch,
    mutual_information,
)
from .measurement_io import MeasurementFileError, load_measurement
from .optimize import numeric_maximize, solve_stationarity
from .povm import (
    Povm,
    ProductElement,
    entanglement_measure,
    feasibility_check,
    product_directions,
    reduce_product_measurement,
    validate_completeness,
)
from .quadrature import QuadratureError, SphereGrid, build_grid

__all__ = ["main", "entry_point"]

DEFAULT_GRID = (128, 256)
COMPLETENESS_TOL = 1e-9
PRODUCT_TOL = 1e-9
CROSS_CHECK_TOL = 1e-3

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_NUMERICAL = 2


def _fmt(value: float) -> str:
    """Fixed 12-significant-digit formatting used for all CSV and table output."""
    return f"{value:.12g}"


def _parse_grid(text: str) -> tuple[int, int]:
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError("grid must be given as THETA_ORDER,PHI_ORDER")
    try:
        orders = (int(parts[0]), int(parts[1]))
    except ValueError:
        raise argparse.ArgumentTypeError("grid orders must be integers") from None
    return orders


def _resolve_measurement(token: str):
    """Catalog name or path of a measurement file -> (label, Povm, product form or None)."""
    if token in CATALOG_NAMES:
        named = build_named(token)
        return named.name, named.povm, named.product_form
    loaded = load_measurement(token)
    for warning in loaded.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    return str(token), loaded.povm, None


def _write_rows(path: Optional[str], header: Sequence[str], rows: Sequence[Sequence[str]]) -> None:
    lines = [",".join(header)]
    lines.extend(",".join(row) for row in rows)
    text = "\n".join(lines) + "\n"
    if path is None:
        sys.stdout.write(text)
    else:
        Path(path).write_text(text, encoding="utf-8", newline="\n")


def _print_report(label: str, ensemble: str, report: InfoReport) -> None:
    print(f"measurement: {label}")
    print(f"ensemble: {ensemble}")
    print(f"grid: {report.grid_orders[0]} x {report.grid_orders[1]}")
    print(f"mutual information [bits]: {_fmt(report.mutual_information_bits)}")
    print(f"quadrature error estimate: {report.error_estimate:.3e}")
    print("outcome  probability       kl_bits")
    for index, term in enumerate(report.per_outcome):
        flag = "  (degenerate)" if term.degenerate else ""
        print(f"{index:>7}  {term.probability:<16.12f}  {_fmt(term.kl_bits)}{flag}")


def cmd_eval(args) -> int:
    try:
        label, povm, _ = _resolve_measurement(args.measurement)
    except MeasurementFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    completeness = validate_completeness(povm, COMPLETENESS_TOL)
    if not completeness.ok:
        print(
            "error: POVM is not complete "
            f"(max entry error {completeness.max_entry_error:.3e}, tol {completeness.tol:.1e}); "
            f"weights sum to {_fmt(povm.weight_sum())}",
            file=sys.stderr,
        )
        return EXIT_INVALID
    grid = build_grid(*args.grid)
    report = mutual_information(povm, grid, args.ensemble)
    _print_report(label, args.ensemble, report)
    if args.out is not None:
        rows = [
            [str(i), _fmt(t.probability), _fmt(t.kl_bits)]
            for i, t in enumerate(report.per_outcome)
        ]
        _write_rows(args.out, ("outcome", "probability", "kl_bits"), rows)
    return EXIT_OK


def cmd_scan(args) -> int:
    curves = [c.strip() for c in args.curves.split(",") if c.strip()]
    if not curves or any(c not in ("I", "J") for c in curves):
        print("error: --curves must be a subset of I,J", file=sys.stderr)
        return EXIT_INVALID
    if args.steps < 2:
        print("error: --steps must be at least 2", file=sys.stderr)
        return EXIT_INVALID
    thetas = np.linspace(0.0, math.pi, args.steps)
    columns: dict[str, np.ndarray] = {}
    if "I" in curves:
        grid = build_grid(*args.grid)
        columns["I_bits"] = info_theta_batch(thetas, grid)
    if "J" in curves:
        columns["J_bits"] = np.array([bound_theta(t) for t in thetas])
    header = ["theta"] + [name for name in ("I_bits", "J_bits") if name in columns]
    rows = []
    for i, theta in enumerate(thetas):
        row = [_fmt(theta)] + [_fmt(columns[name][i]) for name in header[1:]]
        rows.append(row)
    _write_rows(args.out, header, rows)
    return EXIT_OK


def cmd_optimize(args) -> int:
    if args.M < 4:
        print("error: --M must be at least 4", file=sys.stderr)
        return EXIT_INVALID
    grid = build_grid(*args.grid)
    analytic = solve_stationarity(args.M, args.objective, grid)
    print(f"objective: {analytic.objective_kind}")
    print(f"outcomes: {args.M}")
    print(f"theta_opt: {_fmt(analytic.theta_opt)}")
    print(f"objective [bits]: {_fmt(analytic.objective_bits)}")
    print(f"weights: {' '.join(_fmt(w) for w in analytic.weights)}")
    print(f"hessian diagonal: {' '.join(_fmt(h) for h in analytic.hessian_diag)}")
    print(f"stationarity residual: {analytic.stationarity_residual:.3e}")
    numeric = numeric_maximize(args.M, args.objective, grid, seed=args.seed)
    gap = abs(numeric.objective_bits - analytic.objective_bits)
    print(
        f"numeric cross-check: {_fmt(numeric.objective_bits)} bits "
        f"(gap {gap:.3e}, converged={numeric.converged}, "
        f"constraint residual {numeric.constraint_residual:.3e})"
    )
    print(f"numeric thetas: {' '.join(_fmt(t) for t in numeric.thetas)}")
    if gap > CROSS_CHECK_TOL or not numeric.converged:
        print(
            f"error: numeric cross-check diverged: analytic {_fmt(analytic.objective_bits)} "
            f"vs numeric {_fmt(numeric.objective_bits)} bits",
            file=sys.stderr,
        )
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_verify(args) -> int:
    try:
        loaded = load_measurement(args.path)
    except MeasurementFileError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    for warning in loaded.warnings:
        print(f"warning: {warning}", file=sys.stderr)
    povm = loaded.povm
    completeness = validate_completeness(povm, COMPLETENESS_TOL)
    print(f"elements: {len(povm)}")
    print(f"weight sum: {_fmt(povm.weight_sum())}")
    print(
        f"completeness: max entry error {completeness.max_entry_error:.3e} "
        f"(tol {completeness.tol:.1e}) -> {'ok' if completeness.ok else 'FAILED'}"
    )
    print("element  weight           entanglement     class")
    product_elements: list[Optional[ProductElement]] = []
    for index, (element, known_product) in enumerate(zip(povm.elements, loaded.product_form)):
        measure = entanglement_measure(element.state)
        is_product = measure <= PRODUCT_TOL
        print(
            f"{index:>7}  {_fmt(element.weight):<15}  {measure:<15.3e}  "
            f"{'product' if is_product else 'entangled'}"
        )
        if known_product is not None:
            product_elements.append(known_product)
        elif is_product:
            first, second = product_directions(element.state, PRODUCT_TOL)
            product_elements.append(ProductElement(element.weight, first, second))
        else:
            product_elements.append(None)
    if all(p is not None for p in product_elements):
        reduced = reduce_product_measurement([p for p in product_elements if p is not None])
        feasibility = feasibility_check(reduced)
        print("reduced (weight, opening angle) pairs:")
        for weight, theta in reduced.pairs:
            print(f"  {_fmt(weight)}  {_fmt(theta)}")
        print(
            f"feasibility: sum_c={_fmt(feasibility.sum_c)} "
            f"sum_c_cos={_fmt(feasibility.sum_c_cos)} -> {'ok' if feasibility.ok else 'FAILED'}"
        )
    if not completeness.ok:
        return EXIT_INVALID
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spininfo",
        description=(
            "Shannon information extracted by POVM measurements on two-spin "
            "ensembles encoding a uniformly random direction."
        ),
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_eval = sub.add_parser("eval", help="evaluate the mutual information of a measurement")
    p_eval.add_argument(
        "--measurement",
        required=True,
        help=f"catalog name ({', '.join(CATALOG_NAMES)}) or path to a measurement file",
    )
    p_eval.add_argument("--ensemble", choices=ENSEMBLE_KINDS, default=ANTIPARALLEL)
    p_eval.add_argument("--grid", type=_parse_grid, default=DEFAULT_GRID, metavar="T,P")
    p_eval.add_argument("--out", help="also write the per-outcome table as CSV")
    p_eval.set_defaults(func=cmd_eval)

    p_scan = sub.add_parser("scan", help="tabulate the information curve and its bound")
    p_scan.add_argument("--curves", default="I,J", help="subset of I,J (default both)")
    p_scan.add_argument("--steps", type=int, default=181)
    p_scan.add_argument("--grid", type=_parse_grid, default=DEFAULT_GRID, metavar="T,P")
    p_scan.add_argument("--out", help="CSV output path (default stdout)")
    p_scan.set_defaults(func=cmd_scan)

    p_opt = sub.add_parser("optimize", help="maximize the information or its bound")
    p_opt.add_argument("--objective", choices=("I", "J"), required=True)
    p_opt.add_argument("--M", type=int, default=4, help="number of outcomes (at least 4)")
    p_opt.add_argument("--grid", type=_parse_grid, default=DEFAULT_GRID, metavar="T,P")
    p_opt.add_argument("--seed", type=int, default=1, help="seed for the numeric cross-check")
    p_opt.set_defaults(func=cmd_optimize)

    p_verify = sub.add_parser("verify", help="validate a measurement file")
    p_verify.add_argument("path", help="measurement file to check")
    p_verify.set_defaults(func=cmd_verify)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except QuadratureError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


def entry_point() -> None:
    raise SystemExit(main())
