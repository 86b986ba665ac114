import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riplab.bases import FunctionExpansion, eval_basis, legendre, unit_vector
from riplab.measure import child_seed, make_uniform, optimal_weight
from riplab.models import CapabilityError, LinearSpan, Singleton, TensorRank, WeightedSparse, bhat_linear
from riplab.norms import (EmpiricalDesign, Seminorm, empirical_gram, empirical_norm, empirical_norm_noisy,
                          gram_matrix, quadrature_error, rip_holds, sobolev_stack,
                          tensor_pairing, true_norm, variation_constant, weighted_sup_norm)


def test_sobolev_norm_of_L1():
    assert true_norm(unit_vector(legendre(3), 1), sobolev_stack(1)) == pytest.approx(2.0, rel=1e-13)


def test_sobolev_gram_matches_manual():
    G = gram_matrix(legendre(3), sobolev_stack(1))
    # L_1' = sqrt(3), L_2' = 3 sqrt(5) y; <L_2', L_2'> = 45/3 = 15
    np.testing.assert_allclose(np.diag(G), [1, 4, 16], rtol=1e-13)


def test_seminorm_validation():
    with pytest.raises(ValueError):
        Seminorm("bogus")
    with pytest.raises(ValueError):
        Seminorm("point", 1)
    assert sobolev_stack(2).height == 3


def test_tensor_pairing():
    a = np.arange(4.0).reshape(2, 2)
    assert tensor_pairing()(a, np.eye(2)) == pytest.approx(3.0)


def test_empirical_norm_unbiased():
    v = unit_vector(legendre(3), 1)
    vals = [empirical_norm(v, EmpiricalDesign.draw(make_uniform(), 1000, child_seed(0, r))) ** 2 for r in range(200)]
    assert abs(np.mean(vals) - 1) < 3 * np.std(vals) / math.sqrt(len(vals))


def test_empirical_norm_callable_and_noise():
    d = EmpiricalDesign(np.array([0.0, 0.5]), np.array([1.0, 2.0]))
    assert empirical_norm(lambda y: y, d) == pytest.approx(math.sqrt(0.25))
    assert empirical_norm_noisy(lambda y: y, d, np.array([1.0, 0.0])) == pytest.approx(math.sqrt(0.75))
    with pytest.raises(ValueError):
        empirical_norm_noisy(lambda y: y, d, np.zeros(3))


def test_design_validation():
    with pytest.raises(ValueError):
        EmpiricalDesign(np.array([0.0]), np.array([0.0]))
    with pytest.raises(ValueError):
        EmpiricalDesign(np.array([0.0]), np.array([np.inf]))
    with pytest.raises(ValueError):
        EmpiricalDesign(np.array([0.0, 1.0]), np.array([1.0]))


def test_gram_single_point():
    G, dev = empirical_gram(legendre(2), EmpiricalDesign(np.array([0.0]), np.array([1.0])))
    np.testing.assert_allclose(G, np.diag([1.0, 0.0]), atol=1e-15)
    assert dev == pytest.approx(1.0)


def test_gram_converges():
    devs = [empirical_gram(legendre(3), EmpiricalDesign.draw(make_uniform(), 10**5, child_seed(1, r)))[1] for r in range(20)]
    assert np.median(devs) < 0.05


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 10**6), st.integers(3, 40))
def test_quadrature_error_is_sup_over_unit_sphere(seed, n):
    basis = legendre(3)
    d = EmpiricalDesign.draw(make_uniform(), n, seed)
    err = quadrature_error(LinearSpan(basis), d)
    rng = np.random.default_rng(seed)
    c = rng.standard_normal((2000, 3))
    c /= np.linalg.norm(c, axis=1, keepdims=True)
    B = eval_basis(basis, d.points)
    dev = np.abs(np.mean(d.weights[:, None] * (B @ c.T) ** 2, axis=0) - 1)
    assert dev.max() <= err + 1e-12


def test_quadrature_error_singleton_and_sobolev():
    v = unit_vector(legendre(3), 1)
    d = EmpiricalDesign(np.array([1.0]), np.array([1.0]))
    assert quadrature_error(Singleton(v), d) == pytest.approx(2.0)
    ds = EmpiricalDesign(np.array([1.0]), np.array([1.0]), sobolev_stack(1))
    # |L_1|^2_y = 3 + 3 at y = 1, ||L_1||^2_{H1} = 4
    assert quadrature_error(Singleton(v), ds) == pytest.approx(0.5)
    assert quadrature_error(LinearSpan(legendre(2), (1,)), ds) == pytest.approx(0.5)


def test_sparse_certificate_two_functions():
    basis = legendre(2)
    d = EmpiricalDesign.draw(make_uniform(), 8, 5)
    G, _ = empirical_gram(basis, d)
    expected = max(abs(G[0, 0] - 1), abs(G[1, 1] - 1))
    assert quadrature_error(WeightedSparse(basis, np.ones(2), 1), d) == pytest.approx(expected)
    # dense search over 1-sparse unit vectors
    B = eval_basis(basis, d.points)
    for j in range(2):
        assert abs(np.mean(d.weights * B[:, j] ** 2) - 1) <= expected + 1e-12


def test_rip_holds_and_capability():
    d = EmpiricalDesign.draw(make_uniform(), 50, 0)
    model = LinearSpan(legendre(3))
    assert rip_holds(model, d, quadrature_error(model, d) + 1e-9)
    assert not rip_holds(model, d, quadrature_error(model, d) - 1e-9)
    with pytest.raises(CapabilityError):
        quadrature_error(TensorRank(2, 2, 1), d)


def test_variation_constants():
    assert variation_constant(LinearSpan(legendre(10))).value == pytest.approx(100, abs=1e-6)
    opt = optimal_weight(bhat_linear(legendre(2)))
    assert variation_constant(LinearSpan(legendre(2)), opt.weight).value == pytest.approx(2, abs=1e-6)
    sparse = WeightedSparse(legendre(6), np.sqrt(2 * np.arange(6) + 1), 3)
    kv = variation_constant(sparse)
    assert not kv.exact and kv.value <= 3 + 1e-9
    assert math.isinf(variation_constant(TensorRank(2, 2, 1), unbounded_support=True).value)
    with pytest.raises(CapabilityError):
        variation_constant(TensorRank(2, 2, 1))


def test_weighted_sup_norm():
    v = FunctionExpansion(legendre(3), np.array([0, 0, 1.0]))
    assert weighted_sup_norm(v) == pytest.approx(math.sqrt(5))
