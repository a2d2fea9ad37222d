"""Command-line front end: ``drawdown eval | table | simulate | verify``.

Exit codes: 0 success or suite passed, 1 statistical failure, 2 usage or
domain error.  The random seed is taken from ``--seed``, else from the
``DRAWDOWN_SEED`` environment variable, else 42.  Every output carries the
fully resolved configuration: JSON documents under ``"config"``, CSV files
as a first ``# config {...}`` comment line.
"""

from __future__ import annotations

import argparse
import io
import itertools
import json
import math
import os
import sys
from typing import Any, Sequence

import numpy as np

from drawdown import __version__
from drawdown.analytic.registry import REGISTRY, evaluate, formula_names
from drawdown.errors import DomainError, InsufficientSampleError
from drawdown.simulate import Horizon, McConfig, run_ensemble, write_sink
from drawdown.verify.report import clean_json, dumps
from drawdown.verify.suites import SUITES, SuiteConfig, run_suites

__all__ = ["main", "build_parser", "resolve_seed", "parse_axis", "EXIT_OK", "EXIT_FAIL", "EXIT_USAGE"]

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_USAGE = 2

SEED_ENV = "DRAWDOWN_SEED"
DEFAULT_SEED = 42
FUNCTIONALS = ("d_plus", "d_minus", "d_plus_sq", "d_plus_d_minus", "inf_first", "T")

# Formula parameters exposed as flags; ``--lambda`` maps to "lambda".
_PARAM_FLAGS = sorted({p.name for f in REGISTRY.values() for p in f.params})


class UsageError(Exception):
    """Bad command-line input; reported with exit code 2."""


def resolve_seed(flag: int | None, environ=None) -> int:
    """Seed from the flag, else ``DRAWDOWN_SEED``, else 42."""
    if flag is not None:
        seed = flag
    else:
        raw = (os.environ if environ is None else environ).get(SEED_ENV)
        if raw is None or raw.strip() == "":
            return DEFAULT_SEED
        try:
            seed = int(raw.strip(), 10)
        except ValueError:
            raise UsageError(f"{SEED_ENV} must be a decimal integer, got {raw!r}") from None
    if not 0 <= seed < 2**64:
        raise UsageError("seed must lie in [0, 2^64)")
    return seed


def parse_axis(text: str) -> np.ndarray:
    """``start:stop:count`` to ``count`` evenly spaced values, ends included."""
    parts = text.split(":")
    if len(parts) != 3:
        raise UsageError(f"grid spec must be start:stop:count, got {text!r}")
    try:
        start, stop, count = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise UsageError(f"grid spec must be start:stop:count, got {text!r}") from None
    if count < 1 or not (math.isfinite(start) and math.isfinite(stop)):
        raise UsageError(f"grid spec needs finite ends and count >= 1, got {text!r}")
    return np.linspace(start, stop, count)


def _scalar(name: str, text: str) -> Any:
    if name == "side":
        return text
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"--{name} expects a number, got {text!r}") from None


# -- output -------------------------------------------------------------------


def _num(v: Any) -> str:
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return str(int(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        v = float(v)
        if math.isnan(v):
            raise DomainError("result is NaN")
        return repr(v) if math.isfinite(v) else ("inf" if v > 0 else "-inf")
    return str(v)


def _config_line(config: dict) -> str:
    return "# config " + json.dumps(clean_json(config), sort_keys=True, allow_nan=False) + "\n"


def _csv(config: dict, header: Sequence[str], rows: Sequence[Sequence[Any]]) -> str:
    buf = io.StringIO(newline="")
    buf.write(_config_line(config))
    buf.write(",".join(header) + "\n")
    for r in rows:
        buf.write(",".join(_num(v) for v in r) + "\n")
    return buf.getvalue()


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


# -- subcommands --------------------------------------------------------------


def _formula_params(args) -> dict[str, str]:
    return {name: getattr(args, name) for name in _PARAM_FLAGS if getattr(args, name) is not None}


def cmd_eval(args) -> int:
    raw = _formula_params(args)
    params = {k: _scalar(k, v) for k, v in raw.items()}
    record = evaluate(args.formula, params)
    config = {"subcommand": "eval", "formula": args.formula, "params": record["params"], "format": args.format}
    if args.format == "json":
        _emit(dumps({"config": config, **record}), args.out)
        return EXIT_OK
    if "values" in record:
        rows = list(record["values"].items())
        _emit(_csv(config, ["name", "value"], rows), args.out)
    else:
        keys = ["value", "log_value", "abs_err_bound"]
        _emit(_csv(config, keys, [[record[k] for k in keys]]), args.out)
    return EXIT_OK


def cmd_table(args) -> int:
    if args.formula not in REGISTRY:
        raise DomainError(f"unknown formula {args.formula!r}; valid names: {', '.join(formula_names())}")
    formula = REGISTRY[args.formula]
    raw = _formula_params(args)
    axes: dict[str, np.ndarray] = {}
    fixed: dict[str, Any] = {}
    for name, text in raw.items():
        if ":" in text:
            axes[name] = parse_axis(text)
        else:
            fixed[name] = _scalar(name, text)
    if not 1 <= len(axes) <= 2:
        raise UsageError("table needs a start:stop:count grid on one or two parameters")
    missing = sorted(set(axes) - set(formula.param_names()))
    if missing:
        raise UsageError(f"{args.formula} has no parameter {', '.join(missing)}; "
                         f"it takes {', '.join(formula.param_names()) or 'none'}")
    names = list(axes)
    rows: list[list[Any]] = []
    value_keys: list[str] | None = None
    resolved_fixed: dict[str, Any] = {}
    for point in itertools.product(*(axes[n] for n in names)):
        params = dict(fixed, **{n: float(v) for n, v in zip(names, point)})
        try:
            record = evaluate(args.formula, params)
        except DomainError as exc:
            where = ", ".join(f"{n}={v!r}" for n, v in zip(names, point))
            raise DomainError(f"at {where}: {exc}") from None
        resolved_fixed = {k: v for k, v in record["params"].items() if k not in axes}
        if "values" in record:
            value_keys = value_keys or list(record["values"])
            rows.append([*point, *(record["values"][k] for k in value_keys)])
        else:
            value_keys = ["value"]
            rows.append([*point, record["value"]])
    config = {
        "subcommand": "table",
        "formula": args.formula,
        "axes": {n: {"start": float(axes[n][0]), "stop": float(axes[n][-1]), "count": len(axes[n])} for n in names},
        "params": resolved_fixed,
        "format": args.format,
    }
    header = names + (value_keys or ["value"])
    if args.format == "csv":
        _emit(_csv(config, header, rows), args.out)
    else:
        _emit(dumps({"config": config, "columns": header, "rows": rows}), args.out)
    return EXIT_OK


def _mc_config(args, seed: int) -> McConfig:
    if args.horizon == "fixed":
        horizon = Horizon("fixed", args.t)
    else:
        horizon = Horizon("exponential", args.lam)
    return McConfig(args.paths, dt=args.dt, seed=seed, horizon=horizon, mu=args.mu,
                    bridge_correction=not args.no_bridge, antithetic=args.antithetic)


def cmd_simulate(args) -> int:
    seed = resolve_seed(args.seed)
    mc = _mc_config(args, seed)
    config = {"subcommand": "simulate", **mc.as_dict(), "aggregate": args.aggregate, "format": args.format}
    if args.aggregate:
        result = run_ensemble(mc, args.aggregate, workers=args.workers)
        est = result.estimate
        doc = {"config": config, "functional": args.aggregate, "mean": est.mean, "std_err": est.std_err, "n": est.n}
        if args.format == "json":
            _emit(dumps(doc), args.out)
        else:
            _emit(_csv(config, ["functional", "mean", "std_err", "n"],
                       [[args.aggregate, est.mean, est.std_err, est.n]]), args.out)
        return EXIT_OK
    if args.format == "json":
        raise UsageError("per-path records are written as CSV; use --aggregate for a JSON summary")
    result = run_ensemble(mc, "d_plus", workers=args.workers)
    buf = io.StringIO(newline="")
    buf.write(_config_line(config))
    write_sink(result.table, buf)
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    seed = resolve_seed(args.seed)
    cfg = SuiteConfig(n_paths=args.paths, dt=args.dt, seed=seed, lam=args.lam, mu=args.mu, workers=args.workers)
    reports = run_suites(args.suite, cfg)
    passed = all(r.passed for r in reports)
    if args.format == "text":
        lines = []
        for r in reports:
            lines.append(f"# suite {r.suite} config " + json.dumps(clean_json(r.config), sort_keys=True))
            lines.extend(r.summary_lines())
        _emit("\n".join(lines) + "\n", args.out)
    elif args.suite == "all":
        _emit(dumps({"suite": "all", "pass": passed, "reports": [r.as_dict() for r in reports]}), args.out)
    else:
        _emit(reports[0].to_json(), args.out)
    return EXIT_OK if passed else EXIT_FAIL


# -- parser -------------------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _add_formula_args(p: argparse.ArgumentParser, grid: bool) -> None:
    p.add_argument("formula", help="registered formula name")
    hint = "number, or start:stop:count for a grid axis" if grid else "number"
    for name in _PARAM_FLAGS:
        p.add_argument(f"--{name}", dest=name, metavar="X" if name != "side" else "SIDE",
                       help="increase | decrease" if name == "side" else hint)
    p.add_argument("--out", help="write to this path instead of stdout")


def _add_mc_args(p: argparse.ArgumentParser, paths_default: int | None) -> None:
    p.add_argument("--paths", type=int, default=paths_default, help="number of paths")
    p.add_argument("--dt", type=float, default=1e-4, help="grid step (default 1e-4)")
    p.add_argument("--seed", type=int, default=None, help=f"run seed (default ${SEED_ENV}, else {DEFAULT_SEED})")
    p.add_argument("--lambda", dest="lam", type=float, default=0.5, help="killing rate (default 0.5)")
    p.add_argument("--mu", type=float, default=0.0, help="drift (default 0)")
    p.add_argument("--workers", type=int, default=1, help="threads; results do not depend on it")
    p.add_argument("--out", help="write to this path instead of stdout")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="drawdown", description="Maximum increase and decrease of Brownian motion with drift.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("eval", help="evaluate one formula")
    _add_formula_args(p, grid=False)
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.set_defaults(run=cmd_eval)

    p = sub.add_parser("table", help="tabulate a formula over one or two grid axes")
    _add_formula_args(p, grid=True)
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(run=cmd_table)

    p = sub.add_parser("simulate", help="simulate paths; per-path CSV records or an aggregate")
    _add_mc_args(p, 10_000)
    p.add_argument("--horizon", choices=("exponential", "fixed"), default="exponential")
    p.add_argument("--t", type=float, default=1.0, help="fixed horizon length (default 1)")
    p.add_argument("--aggregate", choices=FUNCTIONALS, help="print the mean of this functional instead of records")
    p.add_argument("--no-bridge", action="store_true", help="plain grid extremes, no Brownian-bridge sampling")
    p.add_argument("--antithetic", action="store_true", help="pair each path with its reflection")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(run=cmd_simulate)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("--suite", choices=(*SUITES, "all"), default="consistency")
    _add_mc_args(p, None)
    p.add_argument("--format", choices=("json", "text"), default="json")
    p.set_defaults(run=cmd_verify)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.run(args)
    except (DomainError, UsageError, InsufficientSampleError) as exc:
        print(f"drawdown {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
