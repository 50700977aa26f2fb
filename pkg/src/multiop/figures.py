"""Lhs/rhs surfaces of the uncertainty relations over two-parameter state families."""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .csineq import DEFAULT_TOL, PairSet
from .multivariance import partitioned_relation
from .states import (RNG_NAME, RNG_VERSION, dump_operators, one_qubit_family,
                     random_hermitian, random_operator, two_qubit_family)
from .uncertainty import Mode, balanced_relation, tightest_product, unbalanced_relation

# Pinned operator seeds. Figure 5 reuses the operators of figure 1.
FIGURE_SEEDS = {1: 20240101, 2: 20240102, 3: 20240103, 4: 20240104, 5: 20240101}
FIGURE_IDS = tuple(FIGURE_SEEDS)

ONE_QUBIT_AXES = (("theta", 0.0, math.pi), ("phi", 0.0, 2 * math.pi))
TWO_QUBIT_AXES = (("vartheta", 0.0, math.pi / 4), ("eta", 0.0, 1.0))
FIGURE_PAIRS = ((1, 2), (1, 3))


@dataclass(frozen=True)
class FigureSpec:
    figure: int
    relation: str
    M: int
    dim: int
    mode: Mode
    family: str
    axes: tuple
    pairs: tuple | None = None
    p: int | None = None

    @property
    def has_tightest(self) -> bool:
        return self.p is None


FIGURES = {
    1: FigureSpec(1, "balanced-herm", 4, 2, Mode.HERMITIAN, "one-qubit", ONE_QUBIT_AXES),
    2: FigureSpec(2, "unbalanced-herm", 3, 4, Mode.HERMITIAN, "two-qubit", TWO_QUBIT_AXES,
                  pairs=FIGURE_PAIRS),
    3: FigureSpec(3, "balanced-gen", 4, 2, Mode.GENERAL, "one-qubit", ONE_QUBIT_AXES),
    4: FigureSpec(4, "unbalanced-gen", 3, 4, Mode.GENERAL, "two-qubit", TWO_QUBIT_AXES,
                  pairs=FIGURE_PAIRS),
    5: FigureSpec(5, "partitioned", 4, 2, Mode.HERMITIAN, "one-qubit", ONE_QUBIT_AXES, p=2),
}


@dataclass(frozen=True)
class GridOutput:
    """Rows of ``(param1, param2, lhs, rhs[, tightest])`` plus metadata."""

    columns: tuple
    rows: tuple
    metadata: dict = field(default_factory=dict)

    @property
    def failures(self) -> int:
        return self.metadata.get("failures", 0)

    def to_csv(self) -> str:
        lines = [",".join(self.columns)]
        lines += [",".join(f"{x:.17g}" for x in row) for row in self.rows]
        return "\n".join(lines) + "\n"


def figure_operators(figure: int, seed: int | None = None) -> list[np.ndarray]:
    spec = FIGURES[figure]
    seed = FIGURE_SEEDS[figure] if seed is None else seed
    make = random_hermitian if spec.mode is Mode.HERMITIAN else random_operator
    return [make(spec.dim, seed, stream=j) for j in range(spec.M)]


def family_state(family: str, x: float, y: float):
    if family == "one-qubit":
        return one_qubit_family(x, y)
    return two_qubit_family(x, y)


def evaluate_point(spec: FigureSpec, ops, x: float, y: float, tol: float = DEFAULT_TOL):
    """Return ``(report, tightest)`` at one grid point; ``tightest`` is None for partitions."""
    state = family_state(spec.family, x, y)
    if spec.p is not None:
        return partitioned_relation(state, ops, spec.p, tol).to_report(), None
    if spec.pairs is not None:
        # The unbalanced lhs is already the product of the chosen pair spreads.
        report = unbalanced_relation(state, ops, PairSet.of(spec.pairs, spec.M), spec.mode, tol)
        return report, report.lhs
    report = balanced_relation(state, ops, spec.mode, tol)
    return report, tightest_product(state, ops, spec.mode)


def axis_values(axis, count: int) -> np.ndarray:
    _, lo, hi = axis
    return np.linspace(lo, hi, count)


def figure_grid(figure: int, grid: tuple[int, int] = (48, 48), seed: int | None = None,
                tol: float = DEFAULT_TOL) -> GridOutput:
    """Evaluate figure ``figure`` on a ``grid[0] x grid[1]`` parameter grid."""
    if figure not in FIGURES:
        raise ValueError(f"figure must be one of {FIGURE_IDS}, got {figure}")
    n1, n2 = grid
    if n1 < 1 or n2 < 1:
        raise ValueError(f"grid counts must be >= 1, got {n1}x{n2}")
    spec = FIGURES[figure]
    seed = FIGURE_SEEDS[figure] if seed is None else seed
    ops = figure_operators(figure, seed)
    xs, ys = axis_values(spec.axes[0], n1), axis_values(spec.axes[1], n2)
    rows, failures, dominance_failures = [], 0, 0
    worst = math.inf
    for x in xs:
        for y in ys:
            report, tight = evaluate_point(spec, ops, float(x), float(y), tol)
            failures += int(not report.satisfied)
            worst = min(worst, float(report.relative_slack))
            row = (float(x), float(y), report.lhs, report.rhs)
            if spec.has_tightest:
                dominance_failures += int(tight < report.rhs - tol * max(1.0, tight, report.rhs))
                row += (tight,)
            rows.append(row)
    columns = (spec.axes[0][0], spec.axes[1][0], "lhs", "rhs")
    if spec.has_tightest:
        columns += ("tightest",)
    metadata = {
        "figure": figure,
        "relation": spec.relation,
        "mode": spec.mode.value,
        "family": spec.family,
        "M": spec.M,
        "dim": spec.dim,
        "pairs": None if spec.pairs is None else [list(p) for p in spec.pairs],
        "p": spec.p,
        "seed": seed,
        "rng": RNG_NAME,
        "rng_version": RNG_VERSION,
        "tol": tol,
        "axes": [{"name": a[0], "min": a[1], "max": a[2], "count": n}
                 for a, n in zip(spec.axes, grid)],
        "columns": list(columns),
        "rows": len(rows),
        "failures": failures,
        "tightest_below_rhs": dominance_failures,
        "min_relative_slack": worst,
    }
    return GridOutput(columns, tuple(rows), metadata)


def write_figure(output: GridOutput, out_path, ops) -> dict:
    """Write ``out_path`` (CSV), ``<stem>.json`` (metadata) and ``<stem>.ops.json``."""
    out_path = Path(out_path)
    stem = out_path.with_suffix("")
    meta_path = stem.with_name(stem.name + ".json")
    ops_path = stem.with_name(stem.name + ".ops.json")
    meta = dict(output.metadata, csv=out_path.name, operators=ops_path.name)
    out_path.write_text(output.to_csv())
    dump_operators(ops, ops_path, figure=meta["figure"], seed=meta["seed"])
    meta_path.write_text(json.dumps(meta, indent=1, sort_keys=True) + "\n")
    return {"csv": str(out_path), "metadata": str(meta_path), "operators": str(ops_path)}
