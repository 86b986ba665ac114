import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riplab.bases import FunctionExpansion, eval_basis, legendre, unit_vector
from riplab.models import (CapabilityError, LinearSpan, Singleton, TensorRank, WeightSequence,
                           WeightedSparse, bhat_linear, bhat_sparse_bound, bhat_sparse_exact,
                           bhat_sparse_quotient, covering_bound, hyperbolic_cross, maximal_supports,
                           rank1_supremum, sparse_membership, tensor_variation_check)


def test_bhat_linear_two_functions():
    y = np.linspace(-1, 1, 11)
    np.testing.assert_allclose(bhat_linear(legendre(2))(y), 1 + 3 * y**2, rtol=1e-14)
    np.testing.assert_allclose(bhat_linear(legendre(4), [0])(y), 1.0)


def test_bhat_linear_random_search():
    basis = legendre(2)
    rng = np.random.default_rng(0)
    c = rng.standard_normal((10_000, 2))
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    search = np.max((c @ eval_basis(basis, 0.5)) ** 2)
    exact = bhat_linear(basis)(0.5)
    assert search <= exact + 1e-12
    assert search == pytest.approx(exact, rel=1e-3)


def test_bhat_linear_empty():
    with pytest.raises(ValueError):
        bhat_linear(legendre(3), [])


def test_sparse_bound_examples():
    f = bhat_sparse_bound(legendre(2), [1, math.sqrt(3)], 1)
    assert float(f(1.0)) == pytest.approx(1.0)
    assert float(f(0.0)) == pytest.approx(1.0)
    assert float(bhat_sparse_exact(legendre(2), [1, math.sqrt(3)], 1, 1.0)) == pytest.approx(1.0)


def test_sparse_quotient_is_not_a_bound():
    # counterexample: only L_0 admissible, exact bhat = 1 at y = 0.2 exceeds the quotient
    om = [1.0, 2.0]
    q = float(bhat_sparse_quotient(legendre(2), om, 1)(0.2))
    exact = float(bhat_sparse_exact(legendre(2), om, 1, 0.2))
    assert q < exact
    assert float(bhat_sparse_bound(legendre(2), om, 1)(0.2)) >= exact


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_sparse_bound_dominates_exact_and_quotient(m, s, seed):
    rng = np.random.default_rng(seed)
    omega = np.sqrt(2 * np.arange(m) + 1) * rng.uniform(1, 2, m)
    y = np.linspace(-1, 1, 64)
    bound = bhat_sparse_bound(legendre(m), omega, s)(y)
    assert np.all(bound >= bhat_sparse_exact(legendre(m), omega, s, y) - 1e-12)
    assert np.all(bound >= bhat_sparse_quotient(legendre(m), omega, s)(y) - 1e-12)


def test_maximal_supports():
    assert maximal_supports(np.ones(3), 2) == [(0, 1), (0, 2), (1, 2)]
    assert maximal_supports([1, math.sqrt(3)], 1) == [(0,)]
    assert maximal_supports([2.0, 3.0], 1) == []
    with pytest.raises(CapabilityError):
        maximal_supports(np.ones(40), 20, limit=1000)


def test_sparse_membership():
    om = [1, math.sqrt(3)]
    assert sparse_membership(unit_vector(legendre(2), 0), om, 1) == (True, 1.0)
    ok, card = sparse_membership(unit_vector(legendre(2), 1), om, 1)
    assert not ok and card == pytest.approx(3.0)
    model = WeightedSparse(legendre(2), om, 4)
    assert model.contains(FunctionExpansion(legendre(2), np.array([1.0, 1.0])))


def test_weighted_sparse_validation():
    with pytest.raises(ValueError):
        WeightedSparse(legendre(3), [1, 1], 1)
    with pytest.raises(ValueError):
        WeightedSparse(legendre(2), [1, 0], 1)


def test_weight_sequence_admissible():
    assert WeightSequence(np.sqrt(2 * np.arange(5) + 1)).admissible(legendre(5))
    assert not WeightSequence(np.ones(5)).admissible(legendre(5))


def test_singleton_bhat():
    v = unit_vector(legendre(3), 1) * 2.0
    np.testing.assert_allclose(Singleton(v).bhat(np.array([1.0, 0.0])), [3.0, 0.0])


def test_covering_bounds():
    assert covering_bound(LinearSpan(legendre(2)), 1) == pytest.approx(16)
    assert covering_bound(WeightedSparse(legendre(4), np.ones(4), 1), 1, sparse_c=2) == pytest.approx(8)
    with pytest.raises(ValueError):
        covering_bound(LinearSpan(legendre(2)), 0)
    with pytest.raises(CapabilityError):
        covering_bound(Singleton(unit_vector(legendre(2), 0)), 1)
    t = covering_bound(TensorRank(2, 2, 1), 1)
    assert t == pytest.approx((1 / (3 * 3 * 2)) ** -(2 + 4))


def test_hyperbolic_cross():
    assert hyperbolic_cross(3, 2) == [(0, 0), (0, 1), (1, 0)]
    assert all(np.prod([2 * j + 1 for j in idx]) <= 9 for idx in hyperbolic_cross(9, 3))


def test_rank1_supremum_matrix_case():
    # for matrices the rank-1 supremum of (v, y)^2 over unit v is sigma_max(y)^2
    y = np.random.default_rng(1).standard_normal((3, 4))
    assert rank1_supremum(y, rng=2) == pytest.approx(np.linalg.norm(y, 2) ** 2, rel=1e-9)


def test_tensor_check():
    rep = tensor_variation_check(2, 2, 20, seed=0)
    assert rep.max_relative_gap < 1e-6
    np.testing.assert_allclose(rep.full_sups, 1.0)
    with pytest.raises(ValueError):
        tensor_variation_check(10, 4, 1)
