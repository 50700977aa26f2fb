"""Dense complex linear algebra: inner products, states, expectation values.

Vectors and matrices are plain ``numpy`` arrays of ``complex128``. A
:class:`QuantumState` wraps either a ket or a density operator; neither has
to be normalized, and ``trace`` reports the weight actually carried.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .errors import DimensionError, HermiticityError, PositivityError

HERMITIAN_TOL = 1e-10
IMAG_TOL = 1e-12

StateKind = Literal["ket", "density"]


def as_vector(v) -> np.ndarray:
    arr = np.asarray(v, dtype=np.complex128)
    if arr.ndim != 1 or arr.size == 0:
        raise DimensionError(f"expected a nonempty 1-d vector, got shape {arr.shape}")
    return arr


def as_matrix(a, square: bool = True) -> np.ndarray:
    arr = np.asarray(a, dtype=np.complex128)
    if arr.ndim != 2 or arr.size == 0:
        raise DimensionError(f"expected a nonempty 2-d matrix, got shape {arr.shape}")
    if square and arr.shape[0] != arr.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {arr.shape}")
    return arr


def _frozen(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128, copy=True)
    arr.setflags(write=False)
    return arr


def scale_of(*values) -> float:
    """Tolerance scale ``max(1, |x| for x in values)``."""
    mags = [abs(complex(v)) for v in values]
    return max([1.0, *mags])


# --- vectors -----------------------------------------------------------------

def hermitian_inner(u, v) -> complex:
    """Return ``u^dagger v`` (conjugate-linear in the first argument)."""
    u = as_vector(u)
    v = as_vector(v)
    if u.shape != v.shape:
        raise DimensionError(f"dimension mismatch: {u.size} vs {v.size}")
    return complex(np.vdot(u, v))


def norm(v) -> float:
    v = as_vector(v)
    return float(np.sqrt(np.vdot(v, v).real))


# --- matrices ----------------------------------------------------------------

def adjoint(a) -> np.ndarray:
    return as_matrix(a, square=False).conj().T


def matmul(a, b) -> np.ndarray:
    a = as_matrix(a, square=False)
    b = as_matrix(b, square=False)
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"cannot multiply {a.shape} by {b.shape}")
    return a @ b


def madd(a, b) -> np.ndarray:
    a = as_matrix(a, square=False)
    b = as_matrix(b, square=False)
    if a.shape != b.shape:
        raise DimensionError(f"cannot add {a.shape} and {b.shape}")
    return a + b


def mscale(c: complex, a) -> np.ndarray:
    return complex(c) * as_matrix(a, square=False)


def trace(a) -> complex:
    return complex(np.trace(as_matrix(a)))


def is_hermitian(a, tol: float = HERMITIAN_TOL) -> bool:
    a = as_matrix(a)
    return bool(np.max(np.abs(a - a.conj().T)) <= tol)


def require_hermitian(a, tol: float = HERMITIAN_TOL, name: str = "operator") -> np.ndarray:
    a = as_matrix(a)
    if not is_hermitian(a, tol):
        dev = float(np.max(np.abs(a - a.conj().T)))
        raise HermiticityError(f"{name} is not Hermitian (max |A - A^dagger| = {dev:.3e})")
    return a


# --- states ------------------------------------------------------------------

@dataclass(frozen=True)
class QuantumState:
    """A pure ket or a density operator, not necessarily normalized.

    Build instances through :meth:`from_ket` / :meth:`from_density`, which
    validate and freeze the data.
    """

    kind: StateKind
    data: np.ndarray

    @classmethod
    def from_ket(cls, psi) -> "QuantumState":
        return cls("ket", _frozen(as_vector(psi)))

    @classmethod
    def from_density(cls, rho, tol: float = HERMITIAN_TOL) -> "QuantumState":
        """Wrap ``rho`` after checking Hermiticity and positivity to ``tol``."""
        rho = as_matrix(rho)
        require_hermitian(rho, tol, "density operator")
        evals = np.linalg.eigvalsh((rho + rho.conj().T) / 2)
        if evals.size and evals[0] < -tol * max(1.0, float(np.max(np.abs(evals)))):
            raise PositivityError(f"density operator has eigenvalue {evals[0]:.3e} < 0")
        return cls("density", _frozen(rho))

    @property
    def dim(self) -> int:
        return int(self.data.shape[0])

    @property
    def is_pure(self) -> bool:
        return self.kind == "ket"

    @property
    def trace(self) -> float:
        """``<psi|psi>`` for kets, ``tr(rho)`` for density operators."""
        if self.kind == "ket":
            return float(np.vdot(self.data, self.data).real)
        return float(np.trace(self.data).real)

    def density_matrix(self) -> np.ndarray:
        if self.kind == "ket":
            return np.outer(self.data, self.data.conj())
        return np.array(self.data)

    def scaled(self, weight: float) -> "QuantumState":
        """Same state carrying trace multiplied by ``weight``."""
        if self.kind == "ket":
            return QuantumState.from_ket(np.sqrt(weight) * self.data)
        return QuantumState("density", _frozen(weight * self.data))

    def normalized(self) -> "QuantumState":
        return self.scaled(1.0 / self.trace)


def as_state(state) -> QuantumState:
    """Accept a :class:`QuantumState`, a 1-d ket, or a 2-d density matrix."""
    if isinstance(state, QuantumState):
        return state
    arr = np.asarray(state)
    if arr.ndim == 1:
        return QuantumState.from_ket(arr)
    return QuantumState.from_density(arr)


def _check_op(state: QuantumState, a) -> np.ndarray:
    a = as_matrix(a)
    if a.shape[0] != state.dim:
        raise DimensionError(f"operator of dim {a.shape[0]} on state of dim {state.dim}")
    return a


def expectation(state, a) -> complex:
    """``<A>``: ``<psi|A|psi>`` for kets, ``tr(rho A)`` for density operators."""
    state = as_state(state)
    a = _check_op(state, a)
    if state.kind == "ket":
        psi = state.data
        return complex(np.vdot(psi, a @ psi))
    # tr(rho A) = sum_ij rho_ij A_ji
    return complex(np.sum(state.data * a.T))


def real_expectation(state, a, tol: float = IMAG_TOL) -> float:
    """Expectation of a Hermitian operator, asserting the imaginary part vanishes."""
    value = expectation(state, a)
    if abs(value.imag) > tol * scale_of(value, np.max(np.abs(a))):
        raise HermiticityError(f"expectation has imaginary part {value.imag:.3e}")
    return value.real


def deviation(state, a) -> np.ndarray:
    """``A - <A> I``."""
    state = as_state(state)
    a = _check_op(state, a)
    return a - expectation(state, a) * np.eye(state.dim)


def deviations(state, ops: Sequence) -> list[np.ndarray]:
    state = as_state(state)
    return [deviation(state, a) for a in ops]
