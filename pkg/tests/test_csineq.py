import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from multiop.csineq import (InequalityReport, PairSet, Relation, balanced_cs, balanced_cs_batch,
                            balanced_cs_kets, combine_reports, enumerate_pairsets,
                            multivariance_cs_vectors, pair_factors_batch, root_of_product,
                            unbalanced_cs, unbalanced_cs_batch, unbalanced_cs_kets)
from multiop.errors import ArityError, DimensionError, PairSetError
from multiop.linalg import QuantumState
from multiop.states import random_hermitian

seeds = st.integers(0, 2**32 - 1)


def cvecs(seed, M, n):
    rng = np.random.default_rng(seed)
    return rng.normal(size=(M, n)) + 1j * rng.normal(size=(M, n))


# --- balanced form -----------------------------------------------------------

def test_orthogonal_pair():
    r = balanced_cs([[1, 0], [0, 1]])
    assert (r.lhs, r.rhs, r.satisfied) == (1.0, 0.0, True)


def test_identical_unit_vectors_saturate():
    r = balanced_cs([[1, 0]] * 3)
    assert r.lhs == 1.0 and r.rhs == 1.0 and r.slack == 0.0


def test_four_random_vectors_against_all_pairs_oracle():
    vecs = cvecs(4, 4, 6)
    r = balanced_cs(vecs)
    lhs = math.prod(math.sqrt(oracles.inner(v, v).real) for v in vecs)
    prod = math.prod(abs(oracles.inner(vecs[j], vecs[k])) for j, k in itertools.combinations(range(4), 2))
    assert r.satisfied
    assert r.lhs == pytest.approx(lhs, rel=1e-12)
    assert r.rhs == pytest.approx(prod ** (1 / 3), rel=1e-12)


@given(seeds, st.integers(2, 6), st.integers(1, 8))
def test_balanced_holds_on_random_vectors(seed, M, n):
    assert balanced_cs(cvecs(seed, M, n)).satisfied


def test_underflowing_overlaps_use_log_space():
    # the plain product is 1e-800, far below the smallest double
    assert root_of_product([1e-200] * 4, 3) == pytest.approx(10 ** (-800 / 3), rel=1e-12)
    assert root_of_product([1e-200, 0.0, 1e-200], 2) == 0.0


def test_rejects_single_vector_and_ragged_input():
    with pytest.raises(ArityError):
        balanced_cs([[1, 0]])
    with pytest.raises(DimensionError):
        balanced_cs([[1, 0], [1, 0, 0]])


# --- unbalanced form and pair sets -------------------------------------------

def test_single_pair_is_classic_inequality():
    a, b = cvecs(3, 2, 5)
    r = unbalanced_cs([a, b], [(1, 2)])
    assert r.lhs == pytest.approx(np.linalg.norm(a) * np.linalg.norm(b), rel=1e-14)
    assert r.rhs == pytest.approx(abs(np.vdot(a, b)), rel=1e-14)


def test_full_pairset_on_identical_vectors():
    r = unbalanced_cs([[1, 0]] * 3, [(1, 2), (1, 3), (2, 3)])
    assert r.lhs == 1.0 == r.rhs


def test_two_pairs_sharing_first_vector():
    a, b, c = cvecs(11, 3, 4)
    r = unbalanced_cs([a, b, c], [(1, 2), (1, 3)])
    na, nb, nc = (math.sqrt(oracles.inner(v, v).real) for v in (a, b, c))
    assert r.lhs == pytest.approx(na**2 * nb * nc, rel=1e-12)
    assert r.rhs == pytest.approx(abs(oracles.inner(a, b)) * abs(oracles.inner(a, c)), rel=1e-12)


def test_pairset_enumeration_counts():
    assert [p.pairs for p in enumerate_pairsets(3, 3)] == [((1, 2), (1, 3), (2, 3))]
    assert len(enumerate_pairsets(4, 1)) == 6
    assert len(enumerate_pairsets(4, 3)) == math.comb(6, 3) == 20


def test_pairset_canonicalization_and_errors():
    assert PairSet.of([(3, 1), (2, 1)], 3).pairs == ((1, 2), (1, 3))
    with pytest.raises(PairSetError):
        PairSet.of([(1, 1)], 3)
    with pytest.raises(PairSetError):
        PairSet.of([(1, 2), (2, 1)], 3)
    with pytest.raises(IndexError):
        PairSet.of([(1, 4)], 3)
    with pytest.raises(PairSetError):
        PairSet.of([], 3)


@given(seeds, st.integers(2, 5), st.integers(1, 6), st.data())
def test_unbalanced_holds_for_any_pairset(seed, M, n, data):
    P = math.comb(M, 2)
    K = data.draw(st.integers(1, P))
    pairset = data.draw(st.sampled_from(enumerate_pairsets(M, K)))
    assert unbalanced_cs(cvecs(seed, M, n), pairset).satisfied


@given(seeds, st.integers(2, 6))
def test_full_pairset_is_balanced_raised_to_m_minus_1(seed, M):
    vecs = cvecs(seed, M, 3)
    bal = balanced_cs(vecs)
    unb = unbalanced_cs(vecs, PairSet.full(M))
    assert unb.lhs == pytest.approx(bal.lhs ** (M - 1), rel=1e-12)
    assert unb.rhs == pytest.approx(bal.rhs ** (M - 1), rel=1e-10)


@given(seeds, st.integers(2, 5), st.complex_numbers(min_magnitude=0.1, max_magnitude=10),
       st.data())
def test_scaling_one_vector(seed, M, c, data):
    vecs = cvecs(seed, M, 3)
    j = data.draw(st.integers(0, M - 1))
    pairset = data.draw(st.sampled_from(enumerate_pairsets(M, data.draw(st.integers(1, math.comb(M, 2))))))
    before = unbalanced_cs(vecs, pairset)
    vecs2 = vecs.copy()
    vecs2[j] *= c
    after = unbalanced_cs(vecs2, pairset)
    factor = abs(c) ** pairset.multiplicity(j + 1)
    assert after.lhs == pytest.approx(before.lhs * factor, rel=1e-11)
    assert after.rhs == pytest.approx(before.rhs * factor, rel=1e-11)
    assert after.satisfied == before.satisfied


def test_ket_wrappers_are_bit_identical():
    vecs = cvecs(5, 4, 3)
    kets = [QuantumState.from_ket(v) for v in vecs]
    assert balanced_cs_kets(kets) == balanced_cs(vecs)
    assert unbalanced_cs_kets(kets, [(1, 2), (3, 4)]) == unbalanced_cs(vecs, [(1, 2), (3, 4)])


def test_batch_forms_match_scalar_forms():
    stack = np.stack([cvecs(s, 4, 3) for s in range(20)])
    lhs, rhs = balanced_cs_batch(stack)
    pairs = PairSet.of([(1, 3), (2, 4)], 4)
    ulhs, urhs = unbalanced_cs_batch(stack, pairs)
    for i in range(20):
        r = balanced_cs(stack[i])
        assert lhs[i] == pytest.approx(r.lhs, rel=1e-12)
        assert rhs[i] == pytest.approx(r.rhs, rel=1e-12)
        u = unbalanced_cs(stack[i], pairs)
        assert ulhs[i] == pytest.approx(u.lhs, rel=1e-12)
        assert urhs[i] == pytest.approx(u.rhs, rel=1e-12)
    norms, pair_lhs, pair_rhs = pair_factors_batch(stack)
    assert norms.shape == (20, 4) and pair_lhs.shape == pair_rhs.shape == (20, 6)


# --- multivariance form on a vector ------------------------------------------

def test_two_operators_middle_line():
    rng = np.random.default_rng(0)
    a = rng.normal(size=3) + 1j * rng.normal(size=3)
    a /= np.linalg.norm(a)
    A1, A2 = random_hermitian(3, 1), random_hermitian(3, 2)
    r = multivariance_cs_vectors(a, [A1, A2], 1)
    d1 = A1 - np.vdot(a, A1 @ a) * np.eye(3)
    d2 = A2 - np.vdot(a, A2 @ a) * np.eye(3)
    assert r.lhs == pytest.approx(np.linalg.norm(d1 @ a) * np.linalg.norm(d2 @ a), rel=1e-12)
    cov = np.vdot(a, A1 @ A2 @ a) - np.vdot(a, A1 @ a) * np.vdot(a, A2 @ a)
    assert r.rhs == pytest.approx(abs(cov), rel=1e-12)
    assert r.satisfied


def test_identity_operators_give_zero():
    a = np.array([0.6, 0.8j])
    r = multivariance_cs_vectors(a, [np.eye(2)] * 3, 1)
    assert r.lhs == 0.0 and r.rhs == 0.0


def test_every_partition_shares_one_rhs():
    rng = np.random.default_rng(8)
    a = rng.normal(size=4) + 1j * rng.normal(size=4)
    a /= np.linalg.norm(a)
    ops = [random_hermitian(4, 8, stream=j) for j in range(3)]
    reports = [multivariance_cs_vectors(a, ops, p) for p in range(4)]
    devs = oracles.deviation_ops(a.tolist(), [o.tolist() for o in ops])
    sigma = abs(oracles.ordered_mean(a.tolist(), devs))
    assert all(r.satisfied for r in reports)
    for r in reports:
        assert r.rhs == pytest.approx(sigma, rel=1e-12)


def test_partition_point_out_of_range():
    with pytest.raises(ArityError):
        multivariance_cs_vectors([1, 0], [np.eye(2)], 2)


# --- reports -----------------------------------------------------------------

def test_report_tolerance_rule():
    r = InequalityReport.build(1.0, 1.0 + 5e-10, Relation.BALANCED_CS)
    assert r.satisfied
    r = InequalityReport.build(1.0, 1.0 + 5e-9, Relation.BALANCED_CS)
    assert not r.satisfied
    assert r.to_dict()["relation"] == "balanced-cs"


def test_convex_combination_of_valid_reports_is_valid():
    vecs = cvecs(2, 3, 4)
    reports = [unbalanced_cs(vecs, ps) for ps in enumerate_pairsets(3, 2)]
    combined = combine_reports(reports, [0.5, 0.25, 0.25])
    assert combined.satisfied
    assert combined.lhs == pytest.approx(0.5 * reports[0].lhs + 0.25 * (reports[1].lhs + reports[2].lhs))
    with pytest.raises(ArityError):
        combine_reports(reports, [1.0, 1.0, -1.0])
