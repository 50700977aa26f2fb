"""Randomised verification sweeps over seeded draws."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .csineq import (DEFAULT_TOL, InequalityReport, PairSet, balanced_cs, unbalanced_cs)
from .multivariance import M_MAX, all_partitioned_relations, symmetric_relation
from .states import (complex_normal, random_density, random_hermitian, random_operator,
                     random_pure, rng, to_json_obj)
from .uncertainty import Mode, balanced_relation, unbalanced_relation

RELATIONS = ("balanced-cs", "unbalanced-cs", "balanced-herm", "unbalanced-herm",
             "balanced-gen", "unbalanced-gen", "multivariance", "symmetric")
MAX_DIM = 1024


@dataclass(frozen=True)
class SweepConfig:
    relation: str
    M: int = 3
    dim: int = 4
    trials: int = 100
    seed: int = 0
    tol: float = DEFAULT_TOL
    mixed: bool = False

    def validate(self) -> None:
        """Raise ``ValueError`` describing the first invalid field."""
        if self.relation not in RELATIONS:
            raise ValueError(f"relation must be one of {', '.join(RELATIONS)}")
        if self.trials < 1:
            raise ValueError("trials must be >= 1")
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if not 1 <= self.dim <= MAX_DIM:
            raise ValueError(f"dim must lie in 1..{MAX_DIM}")
        low = 1 if self.relation in ("multivariance", "symmetric") else 2
        high = M_MAX if self.relation in ("symmetric",) else 16
        if not low <= self.M <= high:
            raise ValueError(f"M must lie in {low}..{high} for {self.relation}")
        if self.relation.endswith("-cs") and self.mixed:
            raise ValueError("--mixed does not apply to vector relations")


def trial_seed(seed: int, trial: int) -> int:
    """Deterministic 64-bit seed for one trial of a sweep."""
    ss = np.random.SeedSequence([int(seed) & (2**64 - 1), int(trial)])
    return int(ss.generate_state(1, np.uint64)[0])


def random_pairset(gen: np.random.Generator, M: int) -> PairSet:
    all_pairs = [(j, k) for j in range(1, M + 1) for k in range(j + 1, M + 1)]
    K = int(gen.integers(1, len(all_pairs) + 1))
    chosen = gen.choice(len(all_pairs), size=K, replace=False)
    return PairSet.of([all_pairs[i] for i in sorted(chosen)], M)


def _draw_state(seed: int, dim: int, mixed: bool, unnormalized: bool):
    if mixed:
        rank = 1 + int(rng(seed, 99).integers(dim))
        state = random_density(dim, rank, seed)
    else:
        state = random_pure(dim, seed)
    if unnormalized:
        state = state.scaled(float(rng(seed, 98).uniform(0.2, 3.0)))
    return state


def _evaluate(cfg: SweepConfig, seed: int):
    """Draw one instance; return (inputs for the witness, list of reports)."""
    rel = cfg.relation
    if rel.endswith("-cs"):
        gen = rng(seed, 0)
        vecs = complex_normal(gen, (cfg.M, cfg.dim))
        inputs = {"vectors": [[[float(z.real), float(z.imag)] for z in v] for v in vecs]}
        if rel == "balanced-cs":
            return inputs, [balanced_cs(vecs, cfg.tol)]
        pairs = random_pairset(gen, cfg.M)
        inputs["pairs"] = [list(p) for p in pairs.pairs]
        return inputs, [unbalanced_cs(vecs, pairs, cfg.tol)]

    general = rel.endswith("-gen")
    state = _draw_state(seed, cfg.dim, cfg.mixed, unnormalized=general)
    make = random_operator if general else random_hermitian
    ops = [make(cfg.dim, seed, stream=j + 1) for j in range(cfg.M)]
    inputs = {"state": to_json_obj(state), "operators": [to_json_obj(a) for a in ops]}
    mode = Mode.GENERAL if general else Mode.HERMITIAN
    if rel.startswith("balanced"):
        return inputs, [balanced_relation(state, ops, mode, cfg.tol)]
    if rel.startswith("unbalanced"):
        pairs = random_pairset(rng(seed, 97), cfg.M)
        inputs["pairs"] = [list(p) for p in pairs.pairs]
        return inputs, [unbalanced_relation(state, ops, pairs, mode, cfg.tol)]
    if rel == "multivariance":
        return inputs, [r.to_report() for r in all_partitioned_relations(state, ops, cfg.tol)]
    return inputs, [symmetric_relation(state, ops, tol=cfg.tol)]


def run_sweep(cfg: SweepConfig) -> dict:
    """Run ``cfg.trials`` seeded draws and summarise the worst case."""
    cfg.validate()
    violations = 0
    evaluations = 0
    worst = None
    for trial in range(cfg.trials):
        seed = trial_seed(cfg.seed, trial)
        inputs, reports = _evaluate(cfg, seed)
        for report in reports:
            evaluations += 1
            if not report.satisfied:
                violations += 1
            if worst is None or report.relative_slack < worst[0]:
                worst = (report.relative_slack, trial, seed, inputs, report)
    rel_slack, trial, seed, inputs, report = worst
    return {
        "config": asdict(cfg),
        "evaluations": evaluations,
        "violations": violations,
        "min_relative_slack": rel_slack,
        "worst": {"trial": trial, "seed": seed, "inputs": inputs, "report": report.to_dict()},
    }


def min_slack(reports: list[InequalityReport]) -> float:
    return min((r.relative_slack for r in reports), default=math.inf)
