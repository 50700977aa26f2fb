"""Multi-vector Cauchy-Schwarz inequalities.

Given vectors ``a_1..a_M`` with Hermitian inner product ``u.v = u^dagger v``:

* balanced:   ``prod_j |a_j| >= (prod_{j<k} |a_j.a_k|)^(1/(M-1))``
* unbalanced: ``prod_q |a_jq||a_kq| >= prod_q |a_jq.a_kq|`` over a chosen
  set of distinct pairs ``(j_q, k_q)``.
* multivariance form: for one vector ``a`` and Hermitian ``A_1..A_M``,
  ``|a_{p..1}||a_{p+1..M}| >= |<prod_j dA_j>|`` where
  ``a_{j1..jq} = dA_j1 ... dA_jq a``.

Indices in :class:`PairSet` are 1-based to match the usual labelling of
``a_1..a_M``. Everything returns an :class:`InequalityReport`.
"""

from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import ArityError, DimensionError, PairSetError
from .linalg import QuantumState, as_matrix, as_vector, require_hermitian, HERMITIAN_TOL

DEFAULT_TOL = 1e-9


class Relation(str, enum.Enum):
    BALANCED_CS = "balanced-cs"
    UNBALANCED_CS = "unbalanced-cs"
    MULTIVARIANCE_CS = "multivariance-cs"
    BALANCED_HERMITIAN = "balanced-herm"
    UNBALANCED_HERMITIAN = "unbalanced-herm"
    BALANCED_GENERAL = "balanced-gen"
    UNBALANCED_GENERAL = "unbalanced-gen"
    PARTITIONED = "multivariance"
    SYMMETRIC = "symmetric"
    OSCILLATOR = "oscillator-triple"
    COMBINED = "convex-combination"


@dataclass(frozen=True)
class InequalityReport:
    """Outcome of checking ``lhs >= rhs``.

    ``satisfied`` is ``slack >= -tol * scale`` with ``scale = max(1, lhs, rhs)``.
    """

    lhs: float
    rhs: float
    slack: float
    satisfied: bool
    relation: Relation
    scale: float
    tol: float = DEFAULT_TOL
    meta: dict = field(default_factory=dict, compare=False)

    @classmethod
    def build(cls, lhs: float, rhs: float, relation: Relation,
              tol: float = DEFAULT_TOL, **meta) -> "InequalityReport":
        lhs = float(lhs)
        rhs = float(rhs)
        scale = max(1.0, abs(lhs), abs(rhs))
        slack = lhs - rhs
        return cls(lhs, rhs, slack, bool(slack >= -tol * scale), Relation(relation),
                   scale, tol, dict(meta))

    @property
    def relative_slack(self) -> float:
        return self.slack / self.scale

    def to_dict(self) -> dict:
        out = {
            "relation": self.relation.value,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
            "relative_slack": self.relative_slack,
            "satisfied": self.satisfied,
            "scale": self.scale,
            "tol": self.tol,
        }
        if self.meta:
            out["meta"] = self.meta
        return out


def root_of_product(values: Iterable[float], power: int) -> float:
    """``(prod values)^(1/power)``; falls back to log space if the product underflows."""
    vals = [float(v) for v in values]
    if power < 1:
        raise ArityError("root order must be >= 1")
    prod = math.prod(vals)
    if power == 1:
        return prod
    if prod < np.finfo(float).tiny or not math.isfinite(prod):
        if any(v == 0.0 for v in vals):
            return 0.0
        return math.exp(math.fsum(math.log(v) for v in vals) / power)
    return prod ** (1.0 / power)


def combine_reports(reports: Sequence[InequalityReport], weights: Sequence[float] | None = None,
                    tol: float = DEFAULT_TOL) -> InequalityReport:
    """Convex combination of valid inequalities: ``sum w_i lhs_i >= sum w_i rhs_i``."""
    if not reports:
        raise ArityError("need at least one report")
    if weights is None:
        weights = [1.0 / len(reports)] * len(reports)
    w = np.asarray(weights, dtype=float)
    if w.shape != (len(reports),) or np.any(w < 0) or not math.isclose(w.sum(), 1.0, rel_tol=1e-12):
        raise ArityError("weights must be nonnegative, one per report, and sum to 1")
    lhs = math.fsum(wi * r.lhs for wi, r in zip(w, reports))
    rhs = math.fsum(wi * r.rhs for wi, r in zip(w, reports))
    return InequalityReport.build(lhs, rhs, Relation.COMBINED, tol)


# --- pair sets ---------------------------------------------------------------

@dataclass(frozen=True)
class PairSet:
    """Distinct 1-based index pairs ``(j, k)`` with ``j < k``, sorted."""

    pairs: tuple[tuple[int, int], ...]
    M: int

    @classmethod
    def of(cls, pairs: Iterable[Sequence[int]], M: int) -> "PairSet":
        if M < 2:
            raise ArityError(f"pair sets need M >= 2, got {M}")
        canon = []
        for pair in pairs:
            j, k = (int(x) for x in pair)
            if not (1 <= j <= M and 1 <= k <= M):
                raise IndexError(f"pair ({j}, {k}) out of range 1..{M}")
            if j == k:
                raise PairSetError(f"pair ({j}, {k}) repeats an index")
            canon.append((min(j, k), max(j, k)))
        if not canon:
            raise PairSetError("pair set is empty")
        if len(set(canon)) != len(canon):
            raise PairSetError(f"repeated pair in {canon}")
        return cls(tuple(sorted(canon)), M)

    @classmethod
    def full(cls, M: int) -> "PairSet":
        return cls.of(itertools.combinations(range(1, M + 1), 2), M)

    @property
    def K(self) -> int:
        return len(self.pairs)

    def zero_based(self) -> list[tuple[int, int]]:
        return [(j - 1, k - 1) for j, k in self.pairs]

    def multiplicity(self, index: int) -> int:
        """Number of chosen pairs containing vector ``index`` (1-based)."""
        return sum(index in pair for pair in self.pairs)


def enumerate_pairsets(M: int, K: int) -> list[PairSet]:
    """All ``C(C(M,2), K)`` pair sets of size ``K``, in lexicographic order."""
    if M < 2:
        raise ArityError(f"M must be >= 2, got {M}")
    n_pairs = M * (M - 1) // 2
    if not 1 <= K <= n_pairs:
        raise ArityError(f"K must lie in 1..{n_pairs}, got {K}")
    all_pairs = list(itertools.combinations(range(1, M + 1), 2))
    return [PairSet(tuple(c), M) for c in itertools.combinations(all_pairs, K)]


def _vectors(vectors) -> list[np.ndarray]:
    vecs = [as_vector(v) for v in vectors]
    if len(vecs) < 2:
        raise ArityError(f"need M >= 2 vectors, got {len(vecs)}")
    n = vecs[0].size
    for v in vecs[1:]:
        if v.size != n:
            raise DimensionError(f"vector dims differ: {n} vs {v.size}")
    return vecs


def _norms_and_overlaps(vecs: list[np.ndarray]):
    norms = [float(np.sqrt(np.vdot(v, v).real)) for v in vecs]
    overlaps = {}
    for j, k in itertools.combinations(range(len(vecs)), 2):
        overlaps[j, k] = abs(complex(np.vdot(vecs[j], vecs[k])))
    return norms, overlaps


def balanced_cs(vectors, tol: float = DEFAULT_TOL) -> InequalityReport:
    vecs = _vectors(vectors)
    M = len(vecs)
    norms, overlaps = _norms_and_overlaps(vecs)
    lhs = math.prod(norms)
    rhs = root_of_product(overlaps.values(), M - 1)
    return InequalityReport.build(lhs, rhs, Relation.BALANCED_CS, tol, M=M)


def unbalanced_cs(vectors, pairs: PairSet | Iterable[Sequence[int]],
                  tol: float = DEFAULT_TOL) -> InequalityReport:
    vecs = _vectors(vectors)
    M = len(vecs)
    if not isinstance(pairs, PairSet):
        pairs = PairSet.of(pairs, M)
    elif pairs.M != M:
        # validate the indices against this vector list
        pairs = PairSet.of(pairs.pairs, M)
    norms, overlaps = _norms_and_overlaps(vecs)
    idx = pairs.zero_based()
    lhs = math.prod(norms[j] * norms[k] for j, k in idx)
    rhs = math.prod(overlaps[j, k] for j, k in idx)
    return InequalityReport.build(lhs, rhs, Relation.UNBALANCED_CS, tol, M=M, K=pairs.K)


def _ket_arrays(kets) -> list[np.ndarray]:
    out = []
    for ket in kets:
        if isinstance(ket, QuantumState):
            if not ket.is_pure:
                raise DimensionError("ket-form inequalities need pure states")
            out.append(ket.data)
        else:
            out.append(ket)
    return out


def balanced_cs_kets(kets, tol: float = DEFAULT_TOL) -> InequalityReport:
    """Balanced inequality for (unnormalized) kets; same numbers as :func:`balanced_cs`."""
    return balanced_cs(_ket_arrays(kets), tol)


def unbalanced_cs_kets(kets, pairs, tol: float = DEFAULT_TOL) -> InequalityReport:
    return unbalanced_cs(_ket_arrays(kets), pairs, tol)


# --- batched forms -----------------------------------------------------------

def pair_factors_batch(vectors: np.ndarray):
    """Per-instance norms and pair overlaps for a stack of vector sets.

    Parameters
    ----------
    vectors : array, shape (N, M, n)

    Returns
    -------
    norms : (N, M) array
    pair_lhs : (N, P) array of ``|a_j||a_k|`` over the ``P = C(M,2)`` pairs, lexicographic
    pair_rhs : (N, P) array of ``|a_j . a_k|``
    """
    arr = np.asarray(vectors)
    if arr.ndim != 3 or arr.shape[1] < 2:
        raise ArityError(f"expected shape (N, M>=2, n), got {arr.shape}")
    norms = np.sqrt(np.einsum("nmi,nmi->nm", arr.conj(), arr).real)
    gram = np.abs(np.einsum("nji,nki->njk", arr.conj(), arr))
    jj, kk = np.triu_indices(arr.shape[1], k=1)
    return norms, norms[:, jj] * norms[:, kk], gram[:, jj, kk]


def balanced_cs_batch(vectors: np.ndarray):
    """Vectorised :func:`balanced_cs`; returns ``(lhs, rhs)`` arrays of shape (N,)."""
    norms, _, pair_rhs = pair_factors_batch(vectors)
    M = norms.shape[1]
    lhs = np.prod(norms, axis=1)
    with np.errstate(divide="ignore"):
        rhs = np.exp(np.sum(np.log(pair_rhs), axis=1) / (M - 1))
    return lhs, rhs


def unbalanced_cs_batch(vectors: np.ndarray, pairs: PairSet):
    """Vectorised :func:`unbalanced_cs` for one pair set."""
    _, pair_lhs, pair_rhs = pair_factors_batch(vectors)
    M = np.asarray(vectors).shape[1]
    lookup = {pair: i for i, pair in enumerate(itertools.combinations(range(M), 2))}
    cols = [lookup[p] for p in pairs.zero_based()]
    return np.prod(pair_lhs[:, cols], axis=1), np.prod(pair_rhs[:, cols], axis=1)


# --- multivariance form on a single vector -----------------------------------

def _vector_deviations(a: np.ndarray, ops, tol: float) -> list[np.ndarray]:
    devs = []
    eye = np.eye(a.size)
    for i, op in enumerate(ops):
        op = require_hermitian(as_matrix(op), tol, f"operator {i + 1}")
        if op.shape[0] != a.size:
            raise DimensionError(f"operator {i + 1} has dim {op.shape[0]}, vector has {a.size}")
        mean = complex(np.vdot(a, op @ a))
        devs.append(op - mean * eye)
    return devs


def apply_deviations(devs: Sequence[np.ndarray], indices: Sequence[int], a: np.ndarray) -> np.ndarray:
    """``dA_{j1} ... dA_{jq} a`` for 1-based ``indices``; the last index acts first."""
    out = a
    for j in reversed(indices):
        out = devs[j - 1] @ out
    return out


def multivariance_cs_vectors(a, ops, p: int, tol: float = DEFAULT_TOL,
                             hermitian_tol: float = HERMITIAN_TOL) -> InequalityReport:
    """``|a_{p..1}| |a_{p+1..M}| >= |a^dagger dA_1 ... dA_M a|``.

    Means are taken as ``<A> = a^dagger A a`` without normalizing ``a``.
    """
    a = as_vector(a)
    M = len(ops)
    if M < 1:
        raise ArityError("need at least one operator")
    if not 0 <= p <= M:
        raise ArityError(f"partition point p must lie in 0..{M}, got {p}")
    devs = _vector_deviations(a, ops, hermitian_tol)
    left = apply_deviations(devs, list(range(p, 0, -1)), a)
    right = apply_deviations(devs, list(range(p + 1, M + 1)), a)
    sigma = complex(np.vdot(a, apply_deviations(devs, list(range(1, M + 1)), a)))
    lhs = float(np.linalg.norm(left)) * float(np.linalg.norm(right))
    return InequalityReport.build(lhs, abs(sigma), Relation.MULTIVARIANCE_CS, tol, M=M, p=p)
