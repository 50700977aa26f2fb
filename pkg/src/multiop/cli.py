"""Command-line front end.

Exit codes: 0 success, 1 relation violation, 2 usage or schema error,
3 I/O failure, 4 numeric precondition (truncation, positivity, mode).
Relative output paths resolve against ``$MULTIOP_OUT_DIR`` when it is set.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

from .csineq import DEFAULT_TOL
from .errors import (ArityError, DimensionError, HermiticityError, ModeError,
                     NormalizationError, PairSetError, ParameterError, PositivityError,
                     PurityError, TruncationError)
from .figures import FIGURE_IDS, figure_grid, figure_operators, write_figure
from .squeezing import classify, oscillator_demo
from .states import (SchemaError, load_operators, load_state, one_qubit_family,
                     two_qubit_family)
from .sweep import RELATIONS, SweepConfig, run_sweep
from .uncertainty import Mode

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_IO, EXIT_NUMERIC = 0, 1, 2, 3, 4
OUT_DIR_ENV = "MULTIOP_OUT_DIR"

_USAGE_ERRORS = (SchemaError, ParameterError, ArityError, DimensionError, PairSetError)
_NUMERIC_ERRORS = (TruncationError, PositivityError, ModeError, HermiticityError,
                   NormalizationError, PurityError)


class UsageError(Exception):
    pass


def resolve_out(path: str | None, default: str) -> Path:
    p = Path(path if path else default)
    base = os.environ.get(OUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


def parse_grid(text: str) -> tuple[int, int]:
    parts = text.lower().split("x")
    try:
        counts = [int(s) for s in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"grid must look like 48 or 48x48, got {text!r}")
    if len(counts) == 1:
        counts = counts * 2
    if len(counts) != 2 or min(counts) < 1:
        raise argparse.ArgumentTypeError(f"grid must be N or NxM with counts >= 1, got {text!r}")
    return counts[0], counts[1]


def parse_pair(text: str) -> tuple[float, float]:
    try:
        a, b = (float(s) for s in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected two comma-separated numbers, got {text!r}")
    return a, b


def emit(doc: dict, out: Path | None) -> None:
    text = json.dumps(doc, indent=1, sort_keys=True) + "\n"
    if out is None:
        sys.stdout.write(text)
    else:
        out.write_text(text)


# --- subcommands -------------------------------------------------------------

def cmd_verify(args) -> int:
    cfg = SweepConfig(args.relation, args.M, args.dim, args.trials, args.seed, args.tol,
                      args.mixed)
    try:
        cfg.validate()
    except ValueError as exc:
        raise UsageError(str(exc))
    report = run_sweep(cfg)
    emit(report, resolve_out(args.out, "") if args.out else None)
    if args.out:
        print(f"{cfg.relation}: {report['violations']} violations in "
              f"{report['evaluations']} evaluations, min relative slack "
              f"{report['min_relative_slack']:.3e}")
    return EXIT_OK if report["violations"] == 0 else EXIT_VIOLATION


def cmd_figure(args) -> int:
    if not args.tol > 0:
        raise UsageError("tol must be > 0")
    output = figure_grid(args.figure, args.grid, args.seed, args.tol)
    out = resolve_out(args.out, f"fig{args.figure}.csv")
    out.parent.mkdir(parents=True, exist_ok=True)
    ops = figure_operators(args.figure, output.metadata["seed"])
    paths = write_figure(output, out, ops)
    meta = output.metadata
    print(f"figure {args.figure}: {meta['rows']} rows, {meta['failures']} failures -> {paths['csv']}")
    return EXIT_OK if meta["failures"] + meta["tightest_below_rhs"] == 0 else EXIT_VIOLATION


def cmd_squeeze(args) -> int:
    ops = load_operators(args.ops)
    if args.state is not None:
        state = load_state(args.state)
    elif args.family == "one-qubit":
        state = one_qubit_family(*args.params)
    else:
        state = two_qubit_family(*args.params)
    result = classify(state, ops, Mode(args.mode), args.tol)
    emit(result.to_dict(), resolve_out(args.out, "") if args.out else None)
    return EXIT_OK


def cmd_oscillator(args) -> int:
    report = oscillator_demo(args.fock_dim, args.hbar, args.state, args.tol)
    emit(report.to_dict(), resolve_out(args.out, "") if args.out else None)
    return EXIT_OK if report.satisfied else EXIT_VIOLATION


# --- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="multiop", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed_default=0):
        p.add_argument("--tol", type=float, default=DEFAULT_TOL, help="relative tolerance")
        p.add_argument("--out", default=None, help="output path (default: stdout)")
        if seed_default is not None:
            p.add_argument("--seed", type=int, default=seed_default)

    p = sub.add_parser("verify", help="randomised sweep of one relation")
    p.add_argument("--relation", choices=RELATIONS, required=True)
    p.add_argument("--M", type=int, default=3)
    p.add_argument("--dim", type=int, default=4)
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--mixed", action="store_true", help="draw mixed states")
    common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("figure", help="emit a figure grid as CSV plus metadata")
    p.add_argument("figure", type=int, choices=FIGURE_IDS)
    p.add_argument("--grid", type=parse_grid, default=(48, 48), help="N or NxM")
    common(p, seed_default=None)
    p.add_argument("--seed", type=int, default=None, help="operator seed (default: pinned)")
    p.set_defaults(func=cmd_figure)

    p = sub.add_parser("squeeze", help="classify squeezing of an operator set")
    p.add_argument("--ops", required=True, help="operators JSON file")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--state", help="state JSON file")
    src.add_argument("--family", choices=("one-qubit", "two-qubit"))
    p.add_argument("--params", type=parse_pair, default=(0.0, 0.0),
                   help="family parameters 'theta,phi' or 'vartheta,eta'")
    p.add_argument("--mode", choices=[m.value for m in Mode], default=Mode.HERMITIAN.value)
    common(p, seed_default=None)
    p.set_defaults(func=cmd_squeeze)

    p = sub.add_parser("oscillator", help="three-quadrature relation on a truncated oscillator")
    p.add_argument("--fock-dim", type=int, default=40)
    p.add_argument("--hbar", type=float, default=1.0)
    p.add_argument("--state", default="vacuum", help="vacuum | coherent(ALPHA) | number(N)")
    common(p, seed_default=None)
    p.set_defaults(func=cmd_oscillator)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except SchemaError as exc:
        print(f"schema error at {exc.path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, *_USAGE_ERRORS) as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except _NUMERIC_ERRORS as exc:
        print(f"numeric precondition failed: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except json.JSONDecodeError as exc:
        print(f"schema error at $: invalid JSON ({exc})", file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
