"""State families, seeded random generators, concurrence and Fock operators.

Random draws use NumPy's ``PCG64`` bit generator, seeded through
``SeedSequence(seed, spawn_key=(stream,))`` so every ``(seed, stream)``
pair is an independent, reproducible stream. Complex normal entries have
real and imaginary parts each drawn from ``N(0, 1/2)``.

Matrices and states serialise to JSON as::

    {"dim": n, "kind": "operator" | "ket" | "density", "entries": [[re, im], ...]}

with entries in row-major order.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionError, ParameterError
from .linalg import QuantumState, as_matrix, as_state

RNG_NAME = "numpy.PCG64/SeedSequence"
RNG_VERSION = 1

LAMBDA1 = math.cos(math.pi / 8) ** 2
LAMBDA2 = math.sin(math.pi / 8) ** 2

_SIGMA_Y = np.array([[0, -1j], [1j, 0]])


# --- parameterised families --------------------------------------------------

@dataclass(frozen=True)
class OneQubitFamilyParams:
    theta: float
    phi: float
    lambda1: float = LAMBDA1
    lambda2: float = LAMBDA2


@dataclass(frozen=True)
class TwoQubitFamilyParams:
    vartheta: float
    eta: float


def one_qubit_unitary(theta: float, phi: float) -> np.ndarray:
    c, s = math.cos(theta), math.sin(theta)
    return np.array([[c, -s * np.exp(-1j * phi)],
                     [s * np.exp(1j * phi), c]])


def one_qubit_family(theta: float, phi: float) -> QuantumState:
    """``eps Lambda eps^dagger`` with spectrum ``{cos^2(pi/8), sin^2(pi/8)}``."""
    eps = one_qubit_unitary(theta, phi)
    rho = eps @ np.diag([LAMBDA1, LAMBDA2]) @ eps.conj().T
    rho = (rho + rho.conj().T) / 2
    return QuantumState.from_density(rho)


def two_qubit_family(vartheta: float, eta: float) -> QuantumState:
    """Rank-2 two-qubit state with spectrum ``(cos^2 v, sin^2 v)`` and concurrence ``eta cos^2 v``.

    Built as ``l1 |F><F| + l2 |01><01|`` with ``|F> = cos a |00> + sin a |11>``
    and ``sin 2a = eta``.
    """
    if not 0.0 <= vartheta <= math.pi / 4 + 1e-12:
        raise ParameterError(f"vartheta must lie in [0, pi/4], got {vartheta}")
    if not 0.0 <= eta <= 1.0:
        raise ParameterError(f"eta must lie in [0, 1], got {eta}")
    alpha = 0.5 * math.asin(eta)
    l1, l2 = math.cos(vartheta) ** 2, math.sin(vartheta) ** 2
    f = np.array([math.cos(alpha), 0, 0, math.sin(alpha)], dtype=complex)
    e01 = np.array([0, 1, 0, 0], dtype=complex)
    rho = l1 * np.outer(f, f.conj()) + l2 * np.outer(e01, e01.conj())
    return QuantumState.from_density(rho)


def concurrence(rho) -> float:
    """Wootters concurrence of a two-qubit density matrix (or ket)."""
    state = as_state(rho)
    if state.dim != 4:
        raise DimensionError(f"concurrence needs a two-qubit (4x4) state, got dim {state.dim}")
    r = state.density_matrix()
    yy = np.kron(_SIGMA_Y, _SIGMA_Y)
    # With rho = W W^dagger the square roots of the eigenvalues of rho rho~ are
    # the singular values of W^T YY W, so no small eigenvalue is square-rooted.
    # Eigenvalues at rounding level are dropped to keep the rank exact.
    evals, vecs = np.linalg.eigh((r + r.conj().T) / 2)
    keep = evals > 1e-12 * max(float(evals[-1]), 1e-300)
    w = vecs[:, keep] * np.sqrt(evals[keep])
    mu = np.zeros(4)
    sv = np.linalg.svd(w.T @ yy @ w, compute_uv=False)
    mu[: sv.size] = sv
    return float(max(0.0, mu[0] - mu[1] - mu[2] - mu[3]))


# --- random generators -------------------------------------------------------

def rng(seed: int, stream: int = 0) -> np.random.Generator:
    """Independent generator for ``(seed, stream)``."""
    seq = np.random.SeedSequence(int(seed) & (2**64 - 1), spawn_key=(int(stream),))
    return np.random.Generator(np.random.PCG64(seq))


def _gen(seed_or_rng, stream: int = 0) -> np.random.Generator:
    if isinstance(seed_or_rng, np.random.Generator):
        return seed_or_rng
    return rng(seed_or_rng, stream)


def complex_normal(gen: np.random.Generator, shape) -> np.ndarray:
    return (gen.standard_normal(shape) + 1j * gen.standard_normal(shape)) / math.sqrt(2)


def random_operator(dim: int, seed, stream: int = 0) -> np.ndarray:
    if dim < 1:
        raise ParameterError(f"dim must be >= 1, got {dim}")
    return complex_normal(_gen(seed, stream), (dim, dim))


def random_hermitian(dim: int, seed, stream: int = 0) -> np.ndarray:
    g = random_operator(dim, seed, stream)
    return (g + g.conj().T) / 2


def random_pure(dim: int, seed, stream: int = 0) -> QuantumState:
    if dim < 1:
        raise ParameterError(f"dim must be >= 1, got {dim}")
    psi = complex_normal(_gen(seed, stream), dim)
    return QuantumState.from_ket(psi / np.linalg.norm(psi))


def random_density(dim: int, rank: int, seed, stream: int = 0) -> QuantumState:
    """``G G^dagger / tr(G G^dagger)`` with a ``dim x rank`` complex normal ``G``."""
    if dim < 1:
        raise ParameterError(f"dim must be >= 1, got {dim}")
    if not 1 <= rank <= dim:
        raise ParameterError(f"rank must lie in 1..{dim}, got {rank}")
    g = complex_normal(_gen(seed, stream), (dim, rank))
    rho = g @ g.conj().T
    rho = (rho + rho.conj().T) / 2
    return QuantumState.from_density(rho / np.trace(rho).real)


# --- truncated oscillator ----------------------------------------------------

def fock_ladder(dim: int) -> np.ndarray:
    """Annihilation operator ``a|n> = sqrt(n)|n-1>`` on ``n = 0..dim-1``."""
    if dim < 2:
        raise DimensionError(f"Fock space needs dim >= 2, got {dim}")
    return np.diag(np.sqrt(np.arange(1, dim)), k=1).astype(complex)


def position_op(dim: int, hbar: float = 1.0) -> np.ndarray:
    a = fock_ladder(dim)
    return math.sqrt(hbar / 2) * (a + a.conj().T)


def momentum_op(dim: int, hbar: float = 1.0) -> np.ndarray:
    a = fock_ladder(dim)
    return 1j * math.sqrt(hbar / 2) * (a.conj().T - a)


def fock_amplitudes_coherent(alpha: complex, dim: int) -> np.ndarray:
    """Exact coherent-state amplitudes ``exp(-|a|^2/2) a^n / sqrt(n!)`` for ``n < dim``."""
    n = np.arange(dim)
    log_fact = np.array([math.lgamma(k + 1) for k in n])
    if alpha == 0:
        amp = np.zeros(dim, dtype=complex)
        amp[0] = 1.0
        return amp
    mag = abs(alpha)
    log_mag = -mag**2 / 2 + n * math.log(mag) - 0.5 * log_fact
    return np.exp(log_mag) * np.exp(1j * n * np.angle(alpha))


def number_state(n: int, dim: int) -> np.ndarray:
    if not 0 <= n < dim:
        raise ParameterError(f"number state {n} does not fit in dim {dim}")
    v = np.zeros(dim, dtype=complex)
    v[n] = 1.0
    return v


# --- JSON import/export ------------------------------------------------------

def _entries(arr: np.ndarray) -> list[list[float]]:
    return [[float(z.real), float(z.imag)] for z in arr.ravel()]


def to_json_obj(obj) -> dict:
    """Serialise an operator matrix or a :class:`QuantumState`."""
    if isinstance(obj, QuantumState):
        kind = "ket" if obj.is_pure else "density"
        return {"dim": obj.dim, "kind": kind, "entries": _entries(obj.data)}
    arr = as_matrix(obj)
    return {"dim": int(arr.shape[0]), "kind": "operator", "entries": _entries(arr)}


class SchemaError(ValueError):
    """JSON document does not follow the matrix/state schema; ``path`` locates the field."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


def from_json_obj(doc, path: str = "$"):
    """Inverse of :func:`to_json_obj`; returns an ndarray or a :class:`QuantumState`."""
    if not isinstance(doc, dict):
        raise SchemaError(path, "expected an object")
    for key in ("dim", "kind", "entries"):
        if key not in doc:
            raise SchemaError(f"{path}.{key}", "missing field")
    dim = doc["dim"]
    if not isinstance(dim, int) or isinstance(dim, bool) or dim < 1:
        raise SchemaError(f"{path}.dim", "must be a positive integer")
    kind = doc["kind"]
    if kind not in ("operator", "ket", "density"):
        raise SchemaError(f"{path}.kind", f"unknown kind {kind!r}")
    entries = doc["entries"]
    expected = dim if kind == "ket" else dim * dim
    if not isinstance(entries, list) or len(entries) != expected:
        raise SchemaError(f"{path}.entries", f"expected {expected} [re, im] pairs")
    values = np.empty(expected, dtype=complex)
    for i, pair in enumerate(entries):
        if (not isinstance(pair, list) or len(pair) != 2
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in pair)):
            raise SchemaError(f"{path}.entries[{i}]", "expected [re, im] numbers")
        values[i] = complex(pair[0], pair[1])
    if kind == "ket":
        return QuantumState.from_ket(values)
    mat = values.reshape(dim, dim)
    if kind == "density":
        try:
            return QuantumState.from_density(mat)
        except ValueError as exc:
            raise SchemaError(path, str(exc)) from exc
    return mat


def load_operators(path) -> list[np.ndarray]:
    """Read a JSON list of operators (or ``{"operators": [...]}``)."""
    doc = json.loads(Path(path).read_text())
    items = doc.get("operators") if isinstance(doc, dict) else doc
    base = "$.operators" if isinstance(doc, dict) else "$"
    if not isinstance(items, list) or not items:
        raise SchemaError(base, "expected a nonempty list of operators")
    ops = []
    for i, item in enumerate(items):
        op = from_json_obj(item, f"{base}[{i}]")
        if isinstance(op, QuantumState):
            raise SchemaError(f"{base}[{i}].kind", "expected kind 'operator'")
        ops.append(op)
    return ops


def load_state(path) -> QuantumState:
    obj = from_json_obj(json.loads(Path(path).read_text()))
    if not isinstance(obj, QuantumState):
        raise SchemaError("$.kind", "expected kind 'ket' or 'density'")
    return obj


def dump_operators(ops, path, **extra) -> None:
    doc = {"operators": [to_json_obj(a) for a in ops], **extra}
    Path(path).write_text(json.dumps(doc, indent=1, sort_keys=True) + "\n")


def dump_state(state: QuantumState, path) -> None:
    Path(path).write_text(json.dumps(to_json_obj(state), indent=1, sort_keys=True) + "\n")
