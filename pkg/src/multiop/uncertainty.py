"""Covariances and the balanced/unbalanced multi-operator uncertainty relations.

Two modes are supported and chosen explicitly by the caller:

``Mode.HERMITIAN``
    Hermitian operators on a normalized state. Uses
    ``cov(A, B) = <AB> - <A><B>`` and ``sigma_A = sqrt(<A^2> - <A>^2)``.
``Mode.GENERAL``
    Any square operators on a possibly unnormalized state. Uses the
    generalized covariance ``<A^dagger B> - (2 - tr rho) <A^dagger><B>``,
    which equals ``tr(rho dA^dagger dB)`` with ``dA = A - <A>``.

In both modes the matrix of pairwise covariances is a Gram matrix of the
deviation states ``dA_j |psi>``, and every relation here is read off it.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .csineq import DEFAULT_TOL, InequalityReport, PairSet, Relation, root_of_product
from .errors import (ArityError, DimensionError, HermiticityError, ModeError,
                     NormalizationError, PositivityError)
from .linalg import (HERMITIAN_TOL, IMAG_TOL, QuantumState, as_matrix, as_state,
                     expectation, is_hermitian, real_expectation, require_hermitian)

NORM_TOL = 1e-10


class Mode(str, enum.Enum):
    HERMITIAN = "hermitian"
    GENERAL = "general"


@dataclass(frozen=True)
class CovarianceDecomposition:
    """Real and imaginary parts of a (generalized) covariance.

    ``symmetric_part`` is the anticommutator term and ``antisymmetric_part``
    the commutator term; ``modulus`` is rebuilt from the two parts, ``raw``
    is the covariance computed directly.
    """

    symmetric_part: float
    antisymmetric_part: float
    modulus: float
    raw: complex


@dataclass(frozen=True)
class GeneralizedMoments:
    gen_covariance: complex
    gen_variance: float
    gen_std: float
    trace_factor: float


def _ops(state: QuantumState, ops) -> list[np.ndarray]:
    mats = [as_matrix(a) for a in ops]
    for i, a in enumerate(mats):
        if a.shape[0] != state.dim:
            raise DimensionError(f"operator {i + 1} has dim {a.shape[0]}, state has {state.dim}")
    return mats


def _require_normalized(state: QuantumState, tol: float = NORM_TOL) -> None:
    if abs(state.trace - 1.0) > tol:
        raise NormalizationError(
            f"state has trace {state.trace:.12g}; use the generalized covariance for "
            "unnormalized states")


def _clamp_nonnegative(value: float, scale: float, tol: float, what: str) -> float:
    if value < 0.0:
        if value < -tol * scale:
            raise PositivityError(f"{what} is negative: {value:.3e}")
        return 0.0
    return value


# --- Hermitian covariance ----------------------------------------------------

def covariance(state, a, b, hermitian_tol: float = HERMITIAN_TOL) -> complex:
    """``<AB> - <A><B>`` for Hermitian ``A``, ``B`` and a normalized state."""
    state = as_state(state)
    a, b = _ops(state, [a, b])
    require_hermitian(a, hermitian_tol, "A")
    require_hermitian(b, hermitian_tol, "B")
    _require_normalized(state)
    return expectation(state, a @ b) - real_expectation(state, a) * real_expectation(state, b)


def variance(state, a, tol: float = DEFAULT_TOL) -> float:
    value = covariance(state, a, a)
    scale = max(1.0, abs(value))
    if abs(value.imag) > IMAG_TOL * scale:
        raise HermiticityError(f"variance has imaginary part {value.imag:.3e}")
    return _clamp_nonnegative(value.real, scale, tol, "variance")


def std(state, a, tol: float = DEFAULT_TOL) -> float:
    return math.sqrt(variance(state, a, tol))


# --- generalized covariance --------------------------------------------------

def gen_covariance_value(state, a, b) -> complex:
    """``<A^dagger B> - (2 - tr rho) <A^dagger><B>``."""
    state = as_state(state)
    a, b = _ops(state, [a, b])
    ad = a.conj().T
    factor = 2.0 - state.trace
    return expectation(state, ad @ b) - factor * expectation(state, ad) * expectation(state, b)


def gen_variance(state, a, tol: float = DEFAULT_TOL) -> float:
    value = gen_covariance_value(state, a, a)
    scale = max(1.0, abs(value))
    return _clamp_nonnegative(value.real, scale, tol, "generalized variance")


def gen_covariance(state, a, b, tol: float = DEFAULT_TOL) -> GeneralizedMoments:
    """Generalized covariance of ``(A, B)`` together with the generalized spread of ``A``."""
    state = as_state(state)
    cov = gen_covariance_value(state, a, b)
    var = gen_variance(state, a, tol)
    return GeneralizedMoments(cov, var, math.sqrt(var), 2.0 - state.trace)


# --- brackets ----------------------------------------------------------------

def _pair(a, b) -> tuple[np.ndarray, np.ndarray]:
    a = as_matrix(a)
    b = as_matrix(b)
    if a.shape != b.shape:
        raise DimensionError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def commutator(a, b) -> np.ndarray:
    a, b = _pair(a, b)
    return a @ b - b @ a


def anticommutator(a, b) -> np.ndarray:
    a, b = _pair(a, b)
    return a @ b + b @ a


def pseudo_commutator(a, b) -> np.ndarray:
    """``A^dagger B - B^dagger A``; the commutator when both are Hermitian."""
    a, b = _pair(a, b)
    return a.conj().T @ b - b.conj().T @ a


def pseudo_anticommutator(a, b) -> np.ndarray:
    """``A^dagger B + B^dagger A``; the anticommutator when both are Hermitian."""
    a, b = _pair(a, b)
    return a.conj().T @ b + b.conj().T @ a


def covariance_decomposition(state, a, b, generalized: bool = False) -> CovarianceDecomposition:
    """Split a covariance into its anticommutator and commutator terms.

    Hermitian form::

        sym  = <{A,B}>/2 - <A><B>
        anti = <[A,B]>/(2i)

    Generalized form, with ``t = tr rho`` and ``m = <A^dagger><B>``::

        sym  = <A^dagger B + B^dagger A>/2 - (2 - t) Re m
        anti = <A^dagger B - B^dagger A>/(2i) - (2 - t) Im m
    """
    state = as_state(state)
    if generalized:
        a, b = _ops(state, [a, b])
        raw = gen_covariance_value(state, a, b)
        factor = 2.0 - state.trace
        m = expectation(state, a.conj().T) * expectation(state, b)
        sym = expectation(state, pseudo_anticommutator(a, b)) / 2 - factor * m.real
        anti = expectation(state, pseudo_commutator(a, b)) / 2j - factor * m.imag
    else:
        raw = covariance(state, a, b)
        a, b = _ops(state, [a, b])
        sym = expectation(state, anticommutator(a, b)) / 2 \
            - real_expectation(state, a) * real_expectation(state, b)
        anti = expectation(state, commutator(a, b)) / 2j
    scale = max(1.0, abs(sym), abs(anti))
    for part, name in ((sym, "symmetric"), (anti, "antisymmetric")):
        if abs(part.imag) > 1e-10 * scale:
            raise HermiticityError(f"{name} part has imaginary component {part.imag:.3e}")
    sym, anti = sym.real, anti.real
    return CovarianceDecomposition(sym, anti, math.hypot(sym, anti), raw)


def robertson_bound(state, a, b) -> float:
    """``|<[A,B]>/(2i)|``."""
    state = as_state(state)
    return abs(expectation(state, commutator(a, b)) / 2j)


# --- Gram matrix and relations -----------------------------------------------

def validate_mode(state, ops, mode: Mode, hermitian_tol: float = HERMITIAN_TOL):
    """Coerce inputs and check they fit ``mode``; raises :class:`ModeError`."""
    state = as_state(state)
    mode = Mode(mode)
    mats = _ops(state, ops)
    if mode is Mode.HERMITIAN:
        for i, a in enumerate(mats):
            if not is_hermitian(a, hermitian_tol):
                raise ModeError(f"operator {i + 1} is not Hermitian; use mode='general'")
        if abs(state.trace - 1.0) > NORM_TOL:
            raise ModeError(f"state has trace {state.trace:.12g}; use mode='general'")
    return state, mats, mode


def covariance_matrix(state, ops: Sequence, mode: Mode = Mode.HERMITIAN) -> np.ndarray:
    """Matrix ``G[j, k]`` of (generalized) covariances between ``ops[j]`` and ``ops[k]``.

    In Hermitian mode ``G[j, k] = <A_j A_k> - <A_j><A_k>``; in general mode
    ``G[j, k] = <A_j^dagger A_k> - (2 - tr rho)<A_j^dagger><A_k>``.
    """
    state, mats, mode = validate_mode(state, ops, mode)
    M = len(mats)
    if mode is Mode.HERMITIAN:
        means = np.array([real_expectation(state, a) for a in mats], dtype=complex)
        left = mats
        factor = 1.0
    else:
        means = np.array([expectation(state, a) for a in mats])
        left = [a.conj().T for a in mats]
        factor = 2.0 - state.trace
    G = np.empty((M, M), dtype=complex)
    for j in range(M):
        for k in range(M):
            G[j, k] = expectation(state, left[j] @ mats[k])
    if mode is Mode.HERMITIAN:
        G -= np.outer(means, means)
    else:
        G -= factor * np.outer(means.conj(), means)
    return G


def spreads_from_matrix(G: np.ndarray, tol: float = DEFAULT_TOL) -> np.ndarray:
    """Standard deviations from the diagonal of a covariance matrix."""
    out = []
    for j, v in enumerate(np.diag(G)):
        scale = max(1.0, abs(v))
        if abs(v.imag) > 1e-10 * scale:
            raise HermiticityError(f"variance {j + 1} has imaginary part {v.imag:.3e}")
        out.append(math.sqrt(_clamp_nonnegative(v.real, scale, tol, f"variance {j + 1}")))
    return np.array(out)


def balanced_from_matrix(G: np.ndarray, relation: Relation = Relation.BALANCED_HERMITIAN,
                         tol: float = DEFAULT_TOL) -> InequalityReport:
    M = G.shape[0]
    if M < 2:
        raise ArityError(f"balanced relations need M >= 2, got {M}")
    sig = spreads_from_matrix(G, tol)
    lhs = math.prod(sig)
    rhs = root_of_product((abs(G[j, k]) for j in range(M) for k in range(j + 1, M)), M - 1)
    return InequalityReport.build(lhs, rhs, relation, tol, M=M)


def unbalanced_from_matrix(G: np.ndarray, pairs: PairSet,
                           relation: Relation = Relation.UNBALANCED_HERMITIAN,
                           tol: float = DEFAULT_TOL) -> InequalityReport:
    M = G.shape[0]
    if not isinstance(pairs, PairSet):
        pairs = PairSet.of(pairs, M)
    elif pairs.M != M:
        pairs = PairSet.of(pairs.pairs, M)
    sig = spreads_from_matrix(G, tol)
    idx = pairs.zero_based()
    lhs = math.prod(sig[j] * sig[k] for j, k in idx)
    rhs = math.prod(abs(G[j, k]) for j, k in idx)
    return InequalityReport.build(lhs, rhs, relation, tol, M=M, K=pairs.K)


_BALANCED = {Mode.HERMITIAN: Relation.BALANCED_HERMITIAN, Mode.GENERAL: Relation.BALANCED_GENERAL}
_UNBALANCED = {Mode.HERMITIAN: Relation.UNBALANCED_HERMITIAN,
               Mode.GENERAL: Relation.UNBALANCED_GENERAL}


def balanced_relation(state, ops: Sequence, mode: Mode = Mode.HERMITIAN,
                      tol: float = DEFAULT_TOL) -> InequalityReport:
    """``prod_j sigma_j >= (prod_{j<k} |cov_jk|)^(1/(M-1))``."""
    if len(ops) < 2:
        raise ArityError(f"balanced relations need M >= 2, got {len(ops)}")
    mode = Mode(mode)
    G = covariance_matrix(state, ops, mode)
    return balanced_from_matrix(G, _BALANCED[mode], tol)


def unbalanced_relation(state, ops: Sequence, pairs, mode: Mode = Mode.HERMITIAN,
                        tol: float = DEFAULT_TOL) -> InequalityReport:
    """``prod_q sigma_jq sigma_kq >= prod_q |cov_{jq,kq}|``."""
    mode = Mode(mode)
    G = covariance_matrix(state, ops, mode)
    return unbalanced_from_matrix(G, pairs, _UNBALANCED[mode], tol)


def tightest_product(state, ops: Sequence, mode: Mode = Mode.HERMITIAN,
                     tol: float = DEFAULT_TOL) -> float:
    """The uncertainty product ``prod_j sigma_j`` itself."""
    if len(ops) < 2:
        raise ArityError(f"need M >= 2 operators, got {len(ops)}")
    G = covariance_matrix(state, ops, mode)
    return math.prod(spreads_from_matrix(G, tol))
