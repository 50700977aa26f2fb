"""q/M multi-operator squeezing.

For ``M`` operators the balanced relation squared reads
``prod_j var_j >= beta`` with ``beta = (prod_{j<k} |cov_jk|)^(2/(M-1))``.
An operator counts as squeezed when its (generalized) variance lies strictly
below ``beta^(1/M)``; the state is ``q/M`` squeezed when ``q`` operators are,
provided every balanced relation over every subset of the operators holds.
Since the product of all ``M`` variances would then fall below ``beta``,
``q = M`` cannot occur.
"""

from __future__ import annotations

import enum
import itertools
import math
import re
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .csineq import DEFAULT_TOL, InequalityReport, Relation, root_of_product
from .errors import ArityError, ParameterError, TruncationError
from .linalg import QuantumState
from .states import (fock_amplitudes_coherent, momentum_op, position_op, random_hermitian,
                     random_operator, random_pure, random_density)
from .uncertainty import (Mode, balanced_from_matrix, covariance_matrix, spreads_from_matrix,
                          tightest_product)

TAIL_LIMIT = 1e-10
TAU = math.sqrt(4.0 / 3.0)


@dataclass(frozen=True)
class SqueezingClassification:
    M: int
    beta: float
    threshold: float
    gen_variances: tuple[float, ...]
    squeezed_indices: tuple[int, ...]
    q: int
    label: str
    relations_ok: bool
    mode: str = Mode.HERMITIAN.value

    def to_dict(self) -> dict:
        return {
            "M": self.M,
            "beta": self.beta,
            "threshold": self.threshold,
            "gen_variances": list(self.gen_variances),
            "squeezed_indices": list(self.squeezed_indices),
            "q": self.q,
            "label": self.label,
            "relations_ok": self.relations_ok,
            "mode": self.mode,
        }


def _pair_moduli(G: np.ndarray) -> list[float]:
    M = G.shape[0]
    return [abs(G[j, k]) for j in range(M) for k in range(j + 1, M)]


def beta_from_matrix(G: np.ndarray) -> float:
    M = G.shape[0]
    if M < 2:
        raise ArityError(f"beta needs M >= 2, got {M}")
    return root_of_product(_pair_moduli(G), M - 1) ** 2


def beta(state, ops: Sequence, mode: Mode = Mode.HERMITIAN) -> float:
    """Squeezing threshold: the squared rhs of the balanced relation."""
    if len(ops) < 2:
        raise ArityError(f"beta needs M >= 2, got {len(ops)}")
    return beta_from_matrix(covariance_matrix(state, ops, mode))


def unit_beta_scale(beta_value: float, M: int) -> float:
    """Scalar ``s`` such that the operators ``s * A_j`` have beta equal to one.

    Each covariance picks up ``s**2``, so beta scales as ``s**(2M)``. The
    variance-to-threshold ratios, and hence the label, are unchanged.
    """
    if M < 2:
        raise ArityError(f"beta needs M >= 2, got {M}")
    if not beta_value > 0:
        raise ParameterError(f"beta must be positive to rescale, got {beta_value}")
    return beta_value ** (-1.0 / (2 * M))


def is_below(value: float, threshold: float, tol: float = DEFAULT_TOL) -> bool:
    """Strict ``value < threshold`` with ties (to ``tol``) counted as not below."""
    return value < threshold - tol * max(1.0, abs(threshold))


def classify_matrix(G: np.ndarray, tol: float = DEFAULT_TOL,
                    mode: Mode = Mode.HERMITIAN) -> SqueezingClassification:
    M = G.shape[0]
    if M < 2:
        raise ArityError(f"classification needs M >= 2, got {M}")
    relation = Relation.BALANCED_HERMITIAN if Mode(mode) is Mode.HERMITIAN else Relation.BALANCED_GENERAL
    # raises PositivityError on a negative variance
    variances = tuple(float(s) ** 2 for s in spreads_from_matrix(G, tol))
    b = beta_from_matrix(G)
    threshold = b ** (1.0 / M)
    squeezed = tuple(j for j, v in enumerate(variances) if is_below(v, threshold, tol))
    ok = all(balanced_from_matrix(G[np.ix_(sub, sub)], relation, tol).satisfied
             for size in range(2, M + 1)
             for sub in itertools.combinations(range(M), size))
    q = len(squeezed)
    return SqueezingClassification(M, b, threshold, variances, squeezed, q, f"{q}/{M}", ok,
                                   Mode(mode).value)


def classify(state, ops: Sequence, mode: Mode = Mode.HERMITIAN,
             tol: float = DEFAULT_TOL) -> SqueezingClassification:
    """Count the operators squeezed below ``beta^(1/M)`` and check all subset relations."""
    if len(ops) < 2:
        raise ArityError(f"classification needs M >= 2, got {len(ops)}")
    return classify_matrix(covariance_matrix(state, ops, mode), tol, mode)


# --- three-operator table ----------------------------------------------------

class RowLabel(str, enum.Enum):
    THREE_THIRDS_IMPOSSIBLE = "3/3"
    TWO_THIRDS_AB = "2/3 (A,B)"
    TWO_THIRDS_AC = "2/3 (A,C)"
    TWO_THIRDS_BC = "2/3 (B,C)"
    ONE_THIRD_A = "1/3 (A)"
    ONE_THIRD_B = "1/3 (B)"
    ONE_THIRD_C = "1/3 (C)"
    NO_SQUEEZING = "0/3"


# Each row: variances (A, B, C) and products (AB, AC, BC) as multiples of
# beta^(1/3) and beta^(2/3), plus which variances are squeezed.
def _row_forms(label: RowLabel, a: float, b: float, c: float):
    R = RowLabel
    if label is R.THREE_THIRDS_IMPOSSIBLE:
        return (1 / a, 1 / b, 1 / c), None, (0, 1, 2)
    if label is R.TWO_THIRDS_AB:
        return (1 / a, 1 / b, a * b), (1 / (a * b), b, a), (0, 1)
    if label is R.TWO_THIRDS_AC:
        return (1 / a, a * c, 1 / c), (c, 1 / (a * c), a), (0, 2)
    if label is R.TWO_THIRDS_BC:
        return (b * c, 1 / b, 1 / c), (c, b, 1 / (b * c)), (1, 2)
    if label is R.ONE_THIRD_A:
        return (1 / (b * c), b, c), (1 / c, 1 / b, b * c), (0,)
    if label is R.ONE_THIRD_B:
        return (a, 1 / (a * c), c), (1 / c, a * c, 1 / a), (1,)
    if label is R.ONE_THIRD_C:
        return (a, b, 1 / (a * b)), (a * b, 1 / b, 1 / a), (2,)
    return (a, b, c), (a * b, a * c, b * c), ()


_ONE_THIRD_SIDE = {
    RowLabel.ONE_THIRD_A: (2, "b*c"),
    RowLabel.ONE_THIRD_B: (1, "a*c"),
    RowLabel.ONE_THIRD_C: (0, "a*b"),
}
_PAIR_NAMES = ("AB", "AC", "BC")


@dataclass(frozen=True)
class Table1Row:
    row_label: RowLabel
    a: float
    b: float
    c: float
    beta: float
    variances: tuple[float, float, float]
    pair_products: tuple[float, float, float] | None
    pair_moduli: tuple[float, float, float]
    side_conditions: tuple[tuple[str, bool], ...]
    constraints: tuple[tuple[str, bool], ...]
    feasible: bool = field(default=False)


def table1_row(row_label, a: float, b: float, c: float, beta: float,
               pair_moduli: Sequence[float], tol: float = DEFAULT_TOL) -> Table1Row:
    """Instantiate one row of the three-operator squeezing table.

    ``pair_moduli`` are ``(|cov_AB|, |cov_AC|, |cov_BC|)``. The row is
    feasible when every variance-product bound, the triple-product bound
    ``var_A var_B var_C >= beta`` and the row's side conditions hold.
    """
    label = RowLabel(row_label)
    lower = 1.0 if label is RowLabel.NO_SQUEEZING else None
    for name, val in (("a", a), ("b", b), ("c", c)):
        if lower is None and not val > 1.0:
            raise ParameterError(f"{name} must be > 1, got {val}")
        if lower is not None and not val >= lower:
            raise ParameterError(f"{name} must be >= 1, got {val}")
    if beta < 0:
        raise ParameterError(f"beta must be >= 0, got {beta}")
    moduli = tuple(float(m) for m in pair_moduli)
    if len(moduli) != 3:
        raise ParameterError("need three pair moduli (AB, AC, BC)")

    t = beta ** (1 / 3)
    u = beta ** (2 / 3)
    var_f, prod_f, squeezed = _row_forms(label, a, b, c)
    variances = tuple(f * t for f in var_f)
    products = None if prod_f is None else tuple(f * u for f in prod_f)

    def geq(x, y):
        return x >= y - tol * max(1.0, abs(x), abs(y))

    constraints = []
    for j, v in enumerate(variances):
        name = "ABC"[j]
        if j in squeezed:
            constraints.append((f"var_{name} < beta^(1/3)", is_below(v, t, tol)))
        else:
            constraints.append((f"var_{name} >= beta^(1/3)", geq(v, t)))
    constraints.append(("var_A var_B var_C >= beta", geq(math.prod(variances), beta)))
    if products is not None:
        for name, prod, mod in zip(_PAIR_NAMES, products, moduli):
            constraints.append((f"prod_{name} >= |cov_{name}|", geq(prod, mod)))

    side = []
    if label is RowLabel.NO_SQUEEZING:
        side.append(("a,b,c >= 1", min(a, b, c) >= 1.0))
    elif label is not RowLabel.THREE_THIRDS_IMPOSSIBLE:
        side.append(("beta >= 1", beta >= 1.0))
        if label in _ONE_THIRD_SIDE:
            idx, factor_name = _ONE_THIRD_SIDE[label]
            factor = {"b*c": b * c, "a*c": a * c, "a*b": a * b}[factor_name]
            bound = factor * beta ** (-1 / 3) if beta > 0 else math.inf
            side.append((f"|cov_{_PAIR_NAMES[idx]}| >= {factor_name} beta^(-1/3)",
                         geq(moduli[idx], bound)))

    feasible = (label is not RowLabel.THREE_THIRDS_IMPOSSIBLE
                and all(ok for _, ok in constraints) and all(ok for _, ok in side))
    return Table1Row(label, a, b, c, beta, variances, products, moduli,
                     tuple(side), tuple(constraints), feasible)


class Fig6Region(str, enum.Enum):
    IMPOSSIBLE = "impossible"
    TWO_THIRDS = "2/3"
    ONE_THIRD = "1/3"
    NO_SQUEEZING = "0/3"


_REGION_BY_COUNT = {3: Fig6Region.IMPOSSIBLE, 2: Fig6Region.TWO_THIRDS,
                    1: Fig6Region.ONE_THIRD, 0: Fig6Region.NO_SQUEEZING}


def fig6_region(variances: Sequence[float], beta: float, tol: float = 0.0) -> Fig6Region:
    """Region of variance space: how many of three variances lie below ``beta^(1/3)``."""
    if len(variances) != 3:
        raise ArityError("fig6_region takes exactly three variances")
    t = beta ** (1 / 3)
    return _REGION_BY_COUNT[sum(is_below(v, t, tol) for v in variances)]


# --- oscillator --------------------------------------------------------------

@dataclass(frozen=True)
class StateSpec:
    kind: str  # "vacuum" | "coherent" | "number"
    alpha: complex = 0j
    n: int = 0

    def __str__(self) -> str:
        if self.kind == "coherent":
            return f"coherent({self.alpha})"
        if self.kind == "number":
            return f"number({self.n})"
        return "vacuum"


_SPEC_RE = re.compile(r"^\s*(vacuum|coherent|number)\s*(?:\((.*)\)|:(.*))?\s*$")


def parse_state_spec(text: str) -> StateSpec:
    """Parse ``vacuum``, ``coherent(ALPHA)`` or ``number(N)``; ``:`` may replace the parentheses."""
    if isinstance(text, StateSpec):
        return text
    m = _SPEC_RE.match(text)
    if not m:
        raise ParameterError(f"cannot parse state spec {text!r}")
    kind = m.group(1)
    arg = (m.group(2) if m.group(2) is not None else m.group(3) or "").strip()
    if arg.startswith("(") and arg.endswith(")"):
        arg = arg[1:-1].strip()
    if kind == "vacuum":
        if arg:
            raise ParameterError("vacuum takes no argument")
        return StateSpec("vacuum")
    if not arg:
        raise ParameterError(f"{kind} needs an argument")
    try:
        if kind == "coherent":
            return StateSpec("coherent", alpha=complex(arg.replace(" ", "").replace("i", "j")))
        n = int(arg)
    except ValueError as exc:
        raise ParameterError(f"bad argument in {text!r}") from exc
    if n < 0:
        raise ParameterError("number state index must be >= 0")
    return StateSpec("number", n=n)


def oscillator_state(spec: StateSpec, fock_dim: int) -> tuple[QuantumState, float]:
    """Truncated ket and its edge weight.

    The edge weight is the probability outside levels ``0..fock_dim-2``:
    the truncated ``x^2`` and ``p^2`` are wrong only on the top level.
    """
    if spec.kind == "vacuum":
        spec = StateSpec("coherent", alpha=0j)
    if spec.kind == "number":
        if spec.n >= fock_dim - 1:
            raise TruncationError(f"number({spec.n}) sits at or beyond the top Fock level")
        amp = np.zeros(fock_dim, dtype=complex)
        amp[spec.n] = 1.0
        return QuantumState.from_ket(amp), 0.0
    amp = fock_amplitudes_coherent(spec.alpha, fock_dim)
    inner = math.fsum(np.abs(amp[:-1]) ** 2)
    tail = max(0.0, 1.0 - inner)
    return QuantumState.from_ket(amp / np.linalg.norm(amp)), tail


def oscillator_demo(fock_dim: int, hbar: float = 1.0, state_spec="vacuum",
                    tol: float = DEFAULT_TOL, tail_limit: float = TAIL_LIMIT) -> InequalityReport:
    """``sigma_x sigma_p sigma_r >= (tau hbar / 2)^(3/2)`` with ``r = -x - p``, ``tau = sqrt(4/3)``."""
    if fock_dim < 2:
        raise ParameterError(f"fock_dim must be >= 2, got {fock_dim}")
    if hbar <= 0:
        raise ParameterError(f"hbar must be > 0, got {hbar}")
    spec = parse_state_spec(state_spec)
    state, tail = oscillator_state(spec, fock_dim)
    if tail >= tail_limit:
        raise TruncationError(
            f"{spec} leaves weight {tail:.3e} at the edge of a {fock_dim}-level space")
    x = position_op(fock_dim, hbar)
    p = momentum_op(fock_dim, hbar)
    r = -x - p
    lhs = tightest_product(state, [x, p, r], Mode.HERMITIAN, tol)
    rhs = (TAU * hbar / 2) ** 1.5
    return InequalityReport.build(lhs, rhs, Relation.OSCILLATOR, tol, fock_dim=fock_dim,
                                  hbar=hbar, state=str(spec), tail=tail)


# --- witness search ----------------------------------------------------------

def draw_instance(seed: int, M: int, dim: int, mode: Mode = Mode.HERMITIAN, mixed: bool = False):
    """One seeded random ``(state, ops)`` draw as used by the sweeps and the witness search."""
    mode = Mode(mode)
    if mixed:
        state = random_density(dim, max(1, (seed % dim) + 1), seed, stream=0)
    else:
        state = random_pure(dim, seed, stream=0)
    make = random_hermitian if mode is Mode.HERMITIAN else random_operator
    ops = [make(dim, seed, stream=j + 1) for j in range(M)]
    return state, ops


def search_squeezing_witness(q: int, M: int, dim: int, seeds, mode: Mode = Mode.HERMITIAN,
                             tol: float = DEFAULT_TOL):
    """Return ``(seed, state, ops, classification)`` for the first draw with exactly ``q`` squeezed.

    Returns ``None`` if no seed in ``seeds`` works; no existence claim is made.
    """
    for seed in seeds:
        state, ops = draw_instance(seed, M, dim, mode)
        result = classify(state, ops, mode, tol)
        if result.q == q and result.relations_ok and result.beta > 0:
            return seed, state, ops, result
    return None
