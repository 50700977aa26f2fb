"""Ordered and symmetric multivariance and the relations built on them.

The multivariance of an ordered operator list is ``<dA_1 dA_2 ... dA_M>``
with ``dA = A - <A>``. Splitting the product after position ``p`` writes it
as an overlap ``<psi_{p..1}|psi_{p+1..M}>`` of two deviation-product states,
and Cauchy-Schwarz on that overlap gives one relation per ``p = 0..M``.
Mixed states use the form ``tr(rho X^dagger Y)`` in place of the overlap.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .csineq import DEFAULT_TOL, InequalityReport, Relation
from .errors import ArityError, DimensionError, PositivityError, PurityError
from .linalg import (HERMITIAN_TOL, QuantumState, _frozen, as_matrix, as_state, expectation,
                     require_hermitian)

M_MAX = 8


@dataclass(frozen=True)
class OperatorSequence:
    """Ordered Hermitian operators of a common dimension."""

    ops: tuple
    labels: tuple | None = None

    @classmethod
    def of(cls, ops, labels=None, hermitian_tol: float = HERMITIAN_TOL) -> "OperatorSequence":
        if isinstance(ops, OperatorSequence):
            return ops
        mats = [require_hermitian(as_matrix(a), hermitian_tol, f"operator {i + 1}")
                for i, a in enumerate(ops)]
        if not mats:
            raise ArityError("operator sequence is empty")
        dim = mats[0].shape[0]
        for i, a in enumerate(mats):
            if a.shape[0] != dim:
                raise DimensionError(f"operator {i + 1} has dim {a.shape[0]}, expected {dim}")
        if labels is not None:
            labels = tuple(str(x) for x in labels)
            if len(labels) != len(mats):
                raise ArityError("one label per operator required")
        return cls(tuple(_frozen(a) for a in mats), labels)

    @property
    def M(self) -> int:
        return len(self.ops)

    @property
    def dim(self) -> int:
        return int(self.ops[0].shape[0])

    def __len__(self) -> int:
        return len(self.ops)

    def __getitem__(self, item):
        return self.ops[item]

    def permuted(self, order: Sequence[int]) -> "OperatorSequence":
        """Reorder by 0-based ``order``."""
        labels = None if self.labels is None else tuple(self.labels[i] for i in order)
        return OperatorSequence(tuple(self.ops[i] for i in order), labels)


@dataclass(frozen=True)
class PartitionedRelationReport:
    """``lhs_left * lhs_right >= rhs`` for one partition point ``p``."""

    p: int
    lhs_left: float
    lhs_right: float
    rhs: float
    satisfied: bool
    slack: float
    state_kind: str
    tol: float = DEFAULT_TOL

    @property
    def lhs(self) -> float:
        return self.lhs_left * self.lhs_right

    def to_report(self) -> InequalityReport:
        return InequalityReport.build(self.lhs, self.rhs, Relation.PARTITIONED, self.tol,
                                      p=self.p, state_kind=self.state_kind)


def _sequence(seq) -> list[np.ndarray]:
    if isinstance(seq, OperatorSequence):
        return list(seq.ops)
    mats = [as_matrix(a) for a in seq]
    if not mats:
        raise ArityError("operator sequence is empty")
    return mats


def _devs(state: QuantumState, mats: list[np.ndarray]) -> list[np.ndarray]:
    eye = np.eye(state.dim)
    out = []
    for i, a in enumerate(mats):
        if a.shape[0] != state.dim:
            raise DimensionError(f"operator {i + 1} has dim {a.shape[0]}, state has {state.dim}")
        out.append(a - expectation(state, a) * eye)
    return out


def _ordered_mean(state: QuantumState, devs: Sequence[np.ndarray]) -> complex:
    """``<D_1 D_2 ... D_M>``."""
    if state.is_pure:
        vec = state.data
        for d in reversed(devs):
            vec = d @ vec
        return complex(np.vdot(state.data, vec))
    prod = np.eye(state.dim, dtype=complex)
    for d in devs:
        prod = prod @ d
    return expectation(state, prod)


def multivariance(state, seq) -> complex:
    """``<prod_j (A_j - <A_j>)>`` with the operators in the given order."""
    state = as_state(state)
    mats = _sequence(seq)
    return _ordered_mean(state, _devs(state, mats))


def deviation_product_state(state, seq, indices: Sequence[int]) -> np.ndarray:
    """``dA_{j1} ... dA_{jq} |psi>`` for 1-based ``indices`` (``dA_{jq}`` acts first)."""
    state = as_state(state)
    if not state.is_pure:
        raise PurityError("deviation-product states are defined for kets only")
    mats = _sequence(seq)
    for j in indices:
        if not 1 <= j <= len(mats):
            raise ArityError(f"index {j} out of range 1..{len(mats)}")
    devs = _devs(state, mats)
    vec = np.array(state.data)
    for j in reversed(list(indices)):
        vec = devs[j - 1] @ vec
    return vec


def _radicand(value: complex, tol: float, what: str) -> float:
    scale = max(1.0, abs(value))
    if abs(value.imag) > 1e-10 * scale:
        raise PositivityError(f"{what} is not real: {value}")
    if value.real < 0.0:
        if value.real < -tol * scale:
            raise PositivityError(f"{what} is negative: {value.real:.3e}")
        return 0.0
    return value.real


def partitioned_relation(state, seq, p: int, tol: float = DEFAULT_TOL) -> PartitionedRelationReport:
    """Relation for splitting the multivariance after position ``p``.

    ``sqrt(sigma[A_1..A_p, A_p..A_1]) * sqrt(sigma[A_M..A_{p+1}, A_{p+1}..A_M])
    >= |sigma[A_1..A_M]|``, where an empty mirrored sequence stands for
    ``tr(rho)``.
    """
    state = as_state(state)
    seq = OperatorSequence.of(seq)
    M = seq.M
    if not 0 <= p <= M:
        raise ArityError(f"partition point p must lie in 0..{M}, got {p}")
    mats = list(seq.ops)
    devs = _devs(state, mats)
    head, tail = devs[:p], devs[p:]
    left = state.trace if p == 0 else _ordered_mean(state, head + head[::-1])
    right = state.trace if p == M else _ordered_mean(state, tail[::-1] + tail)
    left = _radicand(complex(left), tol, f"left radicand (p={p})")
    right = _radicand(complex(right), tol, f"right radicand (p={p})")
    rhs = abs(_ordered_mean(state, devs))
    lhs_left, lhs_right = math.sqrt(left), math.sqrt(right)
    lhs = lhs_left * lhs_right
    slack = lhs - rhs
    scale = max(1.0, lhs, rhs)
    return PartitionedRelationReport(p, lhs_left, lhs_right, rhs, bool(slack >= -tol * scale),
                                     slack, state.kind, tol)


def all_partitioned_relations(state, seq, tol: float = DEFAULT_TOL) -> list[PartitionedRelationReport]:
    seq = OperatorSequence.of(seq)
    return [partitioned_relation(state, seq, p, tol) for p in range(seq.M + 1)]


# --- symmetric multivariance -------------------------------------------------

def _check_arity(M: int, m_max: int) -> None:
    if M > m_max:
        raise ArityError(f"M = {M} exceeds M_max = {m_max} ({math.factorial(M)} permutations)")


def symmetric_multivariance(state, seq, m_max: int = M_MAX) -> complex:
    """Average of the multivariance over all ``M!`` orderings of ``seq``."""
    state = as_state(state)
    seq = OperatorSequence.of(seq)
    _check_arity(seq.M, m_max)
    devs = _devs(state, list(seq.ops))
    values = [_ordered_mean(state, [devs[i] for i in order])
              for order in itertools.permutations(range(seq.M))]
    n = len(values)
    return complex(math.fsum(v.real for v in values) / n, math.fsum(v.imag for v in values) / n)


def _state_factor(state: QuantumState) -> np.ndarray:
    """``F`` with ``rho = F F^dagger`` (a single column for kets)."""
    if state.is_pure:
        return state.data.reshape(-1, 1)
    evals, evecs = np.linalg.eigh(state.data)
    return evecs * np.sqrt(np.clip(evals, 0.0, None))


def symmetric_relation(state, seq, m_max: int = M_MAX, tol: float = DEFAULT_TOL) -> InequalityReport:
    """Uniform average over orderings and partition points of the partitioned lhs.

    The rhs is ``|symmetric_multivariance|``.
    """
    state = as_state(state)
    seq = OperatorSequence.of(seq)
    M = seq.M
    _check_arity(M, m_max)
    devs = _devs(state, list(seq.ops))
    factor = _state_factor(state)

    # Norms of D_{ip}...D_{i1} F and D_{i(p+1)}...D_{iM} F, memoised by index tuple.
    @lru_cache(maxsize=None)
    def left_vec(prefix: tuple) -> np.ndarray:
        if not prefix:
            return factor
        return devs[prefix[-1]] @ left_vec(prefix[:-1])

    @lru_cache(maxsize=None)
    def right_vec(suffix: tuple) -> np.ndarray:
        if not suffix:
            return factor
        return devs[suffix[0]] @ right_vec(suffix[1:])

    def size(vec: np.ndarray) -> float:
        return float(np.sqrt(np.vdot(vec, vec).real))

    terms = []
    for order in itertools.permutations(range(M)):
        for p in range(M + 1):
            terms.append(size(left_vec(order[:p])) * size(right_vec(order[p:])))
    lhs = math.fsum(terms) / math.factorial(M + 1)
    rhs = abs(symmetric_multivariance(state, seq, m_max))
    return InequalityReport.build(lhs, rhs, Relation.SYMMETRIC, tol, M=M, state_kind=state.kind)
