"""Command-line front end.

Every subcommand writes one table, either as CSV (header always present,
floats with 17 significant digits) or as a JSON document holding the
metadata, the column list and the rows.

Exit status: 0 success, 1 bound/identity violation, 2 invalid input,
3 I/O failure.
"""
from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional

import numpy as np

from .calculus import PQParams
from .convergence import (
    DEFAULT_M_VALUES,
    korovkin_experiment,
    omega2_ratio_experiment,
    parse_schedule,
    voronovskaja_experiment,
)
from .functions import resolve_function
from .moments import (
    lipschitz_bound_check,
    moments_closed_form,
    theorem32_bound_check,
)
from .operator import OperatorSpec, evaluate_grid, evaluate_unnormalized
from .oracle import oracle_moment_identity_check

SUBCOMMANDS = ("eval", "moments", "bounds", "converge", "voronovskaja", "omega2", "oracle-check")

EXIT_OK, EXIT_VIOLATION, EXIT_INVALID, EXIT_IO = 0, 1, 2, 3

COLUMNS = {
    "eval": ["x", "value", "f", "abs_error"],
    "moments": ["x", "e0_summed", "e0_closed", "e1_summed", "e1_closed", "e2_summed", "e2_closed",
                "central1", "central2", "max_abs_diff"],
    "bounds": ["x", "lhs", "rhs", "delta_m", "pass"],
    "converge": ["m", "p_m", "q_m", "sup_error", "bound", "scaled_sup", "e0_error", "e1_error", "e2_error"],
    "voronovskaja": ["m", "p_m", "q_m", "sup_error", "bound", "scaled_sup", "lambda_hat", "cauchy_increment"],
    "omega2": ["m", "p_m", "q_m", "sup_error", "bound", "scaled_sup", "max_ratio"],
    "oracle-check": ["m", "ell", "p", "q", "identity", "holds"],
}

DEFAULT_ORACLE_PARAMS = (("1", "1/2"), ("9/10", "4/5"), ("99/100", "49/50"))

EPILOG = "CSV columns per subcommand:\n" + "\n".join(
    f"  {name:<13} {', '.join(cols)}" for name, cols in COLUMNS.items()
)


class UsageError(Exception):
    """Invalid configuration; reported with exit status 2."""


@dataclass
class RunConfig:
    subcommand: str
    m: int = 8
    ell: int = 0
    p: Optional[str] = None
    q: Optional[str] = None
    m_list: tuple = DEFAULT_M_VALUES
    schedule: Optional[str] = None
    function: str = "e2"
    grid: int = 101
    output_path: Optional[str] = None
    format: str = "csv"
    tolerance: Optional[float] = None
    variant: str = "revised"
    kind: str = "modulus"
    M: Optional[float] = None
    nu: Optional[float] = None
    max_degree: int = 12
    extra: dict = field(default_factory=dict)


@dataclass
class Table:
    columns: list
    rows: list
    metadata: dict
    failed: bool = False


def _fmt(value) -> str:
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return format(float(value), ".17g")
    return str(value)


def render_csv(table: Table) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_fmt(row.get(c)) for c in table.columns])
    return buf.getvalue()


def _jsonable(value):
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def render_json(subcommand: str, table: Table) -> str:
    doc = {
        "subcommand": subcommand,
        "metadata": {k: _jsonable(v) for k, v in table.metadata.items()},
        "columns": table.columns,
        "rows": [{c: _jsonable(row.get(c)) for c in table.columns} for row in table.rows],
    }
    return json.dumps(doc, indent=2) + "\n"


def _float(text, name) -> float:
    try:
        return float(Fraction(text)) if isinstance(text, str) else float(text)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--{name} must be a number, got {text!r}") from None


def _spec(cfg: RunConfig) -> OperatorSpec:
    if cfg.p is None or cfg.q is None:
        raise UsageError(f"{cfg.subcommand} needs --p and --q")
    return OperatorSpec(cfg.m, cfg.ell, PQParams(_float(cfg.p, "p"), _float(cfg.q, "q")))


def _grid(cfg: RunConfig) -> np.ndarray:
    if cfg.grid < 2:
        raise UsageError("--grid must be at least 2")
    return np.linspace(0.0, 1.0, cfg.grid)


def _spec_meta(spec: OperatorSpec, cfg: RunConfig) -> dict:
    return {"m": spec.m, "ell": spec.ell, "p": spec.params.p, "q": spec.params.q,
            "function": cfg.function, "grid": cfg.grid}


def _cmd_eval(cfg: RunConfig) -> Table:
    spec = _spec(cfg)
    f = resolve_function(cfg.function, cfg.ell)
    xs = _grid(cfg)
    if cfg.variant == "revised":
        values = evaluate_grid(spec, f, xs)
    else:
        values = np.array([evaluate_unnormalized(spec, f, x, cfg.variant) for x in xs])
    fx = np.asarray(f(xs), dtype=float)
    rows = [{"x": x, "value": v, "f": fv, "abs_error": abs(v - fv)} for x, v, fv in zip(xs, values, fx)]
    return Table(COLUMNS["eval"], rows, {**_spec_meta(spec, cfg), "variant": cfg.variant})


def _cmd_moments(cfg: RunConfig) -> Table:
    spec = _spec(cfg)
    xs = _grid(cfg)
    summed = [evaluate_grid(spec, resolve_function(f"e{j}", cfg.ell), xs) for j in range(3)]
    cf = moments_closed_form(spec, xs)
    closed = [np.asarray(cf.e0), np.asarray(cf.e1), np.asarray(cf.e2)]
    rows = []
    for i, x in enumerate(xs):
        row = {"x": x}
        for j in range(3):
            row[f"e{j}_summed"] = summed[j][i]
            row[f"e{j}_closed"] = closed[j][i]
        row["central1"] = cf.central1[i]
        row["central2"] = cf.central2[i]
        row["max_abs_diff"] = max(abs(summed[j][i] - closed[j][i]) for j in range(3))
        rows.append(row)
    meta = _spec_meta(spec, cfg)
    meta.pop("function")
    return Table(COLUMNS["moments"], rows, meta)


def _cmd_bounds(cfg: RunConfig) -> Table:
    spec = _spec(cfg)
    f = resolve_function(cfg.function, cfg.ell)
    xs = _grid(cfg)
    tol = None if cfg.tolerance is None else cfg.tolerance
    if cfg.kind == "modulus":
        report = theorem32_bound_check(spec, f, xs, tolerance=tol)
    elif cfg.kind == "lipschitz":
        M, nu = cfg.M, cfg.nu
        if (M is None or nu is None) and f.holder is not None:
            M = f.holder[0] if M is None else M
            nu = f.holder[1] if nu is None else nu
        if M is None or nu is None:
            raise UsageError("--kind lipschitz needs --M and --nu for this function")
        report = lipschitz_bound_check(spec, f, M, nu, xs, tolerance=tol)
    else:
        raise UsageError(f"unknown bound kind {cfg.kind!r}")
    meta = {**_spec_meta(spec, cfg), **report.metadata, "kind": report.kind,
            "omega": report.omega_kind, "violations": len(report.violations)}
    return Table(COLUMNS["bounds"], report.as_records(), meta, failed=not report.all_pass)


def _schedule(cfg: RunConfig, default: str):
    return parse_schedule(cfg.schedule or default)


def _experiment_table(name: str, report) -> Table:
    return Table(COLUMNS[name], report.as_records(), dict(report.metadata))


def _cmd_converge(cfg: RunConfig) -> Table:
    f = resolve_function(cfg.function, cfg.ell)
    rep = korovkin_experiment(_schedule(cfg, "one_minus_inverse"), cfg.ell, f, cfg.m_list, cfg.grid)
    return _experiment_table("converge", rep)


def _cmd_voronovskaja(cfg: RunConfig) -> Table:
    f = resolve_function(cfg.function, cfg.ell)
    rep = voronovskaja_experiment(_schedule(cfg, "power_root:0.9:0.8"), cfg.ell, f, cfg.m_list, cfg.grid)
    return _experiment_table("voronovskaja", rep)


def _cmd_omega2(cfg: RunConfig) -> Table:
    f = resolve_function(cfg.function, cfg.ell)
    rep = omega2_ratio_experiment(_schedule(cfg, "one_minus_inverse"), cfg.ell, f, cfg.m_list, cfg.grid)
    return _experiment_table("omega2", rep)


def _cmd_oracle(cfg: RunConfig) -> Table:
    if cfg.p is not None or cfg.q is not None:
        if cfg.p is None or cfg.q is None:
            raise UsageError("oracle-check needs both --p and --q or neither")
        pairs = [(cfg.p, cfg.q)]
    else:
        pairs = list(DEFAULT_ORACLE_PARAMS)
    try:
        pairs = [(Fraction(p), Fraction(q)) for p, q in pairs]
    except (ValueError, ZeroDivisionError):
        raise UsageError("oracle-check parameters must be rationals such as 9/10") from None
    rows, failed = [], False
    for p, q in pairs:
        for n in range(1, cfg.max_degree + 1):
            for m in range(1, n + 1):
                for name, ok in oracle_moment_identity_check(m, n - m, p, q).items():
                    failed |= not ok
                    rows.append({"m": m, "ell": n - m, "p": str(p), "q": str(q), "identity": name, "holds": ok})
    return Table(COLUMNS["oracle-check"], rows, {"max_degree": cfg.max_degree}, failed=failed)


HANDLERS = {
    "eval": _cmd_eval,
    "moments": _cmd_moments,
    "bounds": _cmd_bounds,
    "converge": _cmd_converge,
    "voronovskaja": _cmd_voronovskaja,
    "omega2": _cmd_omega2,
    "oracle-check": _cmd_oracle,
}


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    """Execute one configuration and write its table; returns the exit status."""
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    try:
        if cfg.format not in ("csv", "json"):
            raise UsageError(f"unknown format {cfg.format!r}")
        table = HANDLERS[cfg.subcommand](cfg)
    except (UsageError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_INVALID
    except KeyError as exc:
        print(f"error: {exc.args[0] if exc.args else exc}", file=stderr)
        return EXIT_INVALID
    except OSError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_IO
    text = render_csv(table) if cfg.format == "csv" else render_json(cfg.subcommand, table)
    try:
        if cfg.output_path:
            Path(cfg.output_path).write_text(text)
        else:
            stdout.write(text)
    except OSError as exc:
        print(f"error: cannot write output: {exc}", file=stderr)
        return EXIT_IO
    if table.failed:
        print(f"error: {cfg.subcommand} found violations", file=stderr)
        return EXIT_VIOLATION
    return EXIT_OK


def _int_list(text: str) -> tuple:
    try:
        values = tuple(int(v) for v in text.split(",") if v.strip())
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if not values:
        raise argparse.ArgumentTypeError("empty list")
    return values


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pqschurer",
        description="Evaluate the revised (p,q)-Bernstein-Schurer operator and run its error-bound "
                    "and convergence experiments.",
        epilog=EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ell", type=int, default=0, help="Schurer shift (default 0)")
    common.add_argument("--function", default="e2",
                        help="e0,e1,e2,e3,exp,sin_scaled,abs_half,sqrt_abs or file:PATH (default e2)")
    common.add_argument("--grid", type=int, default=101, help="points in the x grid on [0,1] (default 101)")
    common.add_argument("--out", dest="output_path", help="output file (default stdout)")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--tolerance", type=float, help="absolute tolerance for bound checks")

    single = argparse.ArgumentParser(add_help=False)
    single.add_argument("--m", type=int, default=8, help="degree parameter (default 8)")
    single.add_argument("--p", help="p in (q, 1]; rationals such as 9/10 allowed")
    single.add_argument("--q", help="q in (0, p)")

    multi = argparse.ArgumentParser(add_help=False)
    multi.add_argument("--m-list", dest="m_list", type=_int_list, default=DEFAULT_M_VALUES,
                       help="comma-separated increasing m values (default 4,8,16,32,64,128)")
    multi.add_argument("--schedule", help="one_minus_inverse or power_root:alpha:beta")

    def add(name, parents, help_text):
        p = sub.add_parser(name, parents=parents, help=help_text, description=help_text,
                           epilog=f"CSV columns: {', '.join(COLUMNS[name])}")
        return p

    ev = add("eval", [common, single], "operator values on a grid")
    ev.add_argument("--variant", choices=("revised", "schurer_eq6", "bernstein_eq4"), default="revised",
                    help="revised operator or one of the unnormalized predecessors")
    add("moments", [common, single], "summed versus closed-form moments")
    bd = add("bounds", [common, single], "pointwise error-bound report (exit 1 on violation)")
    bd.add_argument("--kind", choices=("modulus", "lipschitz"), default="modulus",
                    help="2*omega(f, delta_m) bound or M*delta_m^nu bound")
    bd.add_argument("--M", type=float, help="Lipschitz constant (lipschitz kind)")
    bd.add_argument("--nu", type=float, help="Lipschitz exponent in (0,1] (lipschitz kind)")
    add("converge", [common, multi], "uniform convergence along a parameter schedule")
    add("voronovskaja", [common, multi], "scaled error and fitted lambda along a schedule")
    add("omega2", [common, multi], "error over second modulus along a schedule")
    oc = sub.add_parser("oracle-check", help="exact rational moment identities",
                        epilog=f"CSV columns: {', '.join(COLUMNS['oracle-check'])}")
    oc.add_argument("--max-degree", dest="max_degree", type=int, default=12,
                    help="check every m >= 1, ell >= 0 with m+ell up to this (max 16)")
    oc.add_argument("--p", help="rational p (default: three built-in pairs)")
    oc.add_argument("--q", help="rational q")
    oc.add_argument("--out", dest="output_path")
    oc.add_argument("--format", choices=("csv", "json"), default="csv")
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in known and v is not None})


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
