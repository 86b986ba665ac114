import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riplab.bases import FunctionExpansion, eval_basis, legendre
from riplab.measure import gauss_quadrature, make_uniform
from riplab.norms import EmpiricalDesign, sobolev_stack
from riplab.solve import (InfeasibleError, best_approximation_oracle, error_ratio_experiment,
                          expansion_target, runge, weighted_l1_interpolate, weighted_least_squares)


def test_runge_derivatives_match_finite_differences():
    u = runge(25)
    y = np.linspace(-0.9, 0.9, 7)
    h = 1e-5
    np.testing.assert_allclose(u.samples(y, 1)[:, 1], (u(y + h) - u(y - h)) / (2 * h), rtol=1e-6, atol=1e-9)
    np.testing.assert_allclose(u.samples(y, 2)[:, 2], (u(y + h) - 2 * u(y) + u(y - h)) / h**2, rtol=1e-3, atol=1e-3)
    with pytest.raises(ValueError):
        u.samples(y, 3)


def test_least_squares_recovers_polynomial():
    basis = legendre(5)
    c = np.arange(1.0, 6.0)
    v = FunctionExpansion(basis, c)
    d = EmpiricalDesign.draw(make_uniform(), 20, 0)
    rep = weighted_least_squares(v(d.points), d, basis)
    np.testing.assert_allclose(rep.coefficients, c, atol=1e-10)
    assert rep.residual < 1e-10 and not rep.rank_deficient


def test_least_squares_sobolev_recovers_polynomial():
    basis = legendre(6)
    v = FunctionExpansion(basis, np.linspace(-1, 1, 6))
    d = EmpiricalDesign.draw(make_uniform(), 10, 1, sobolev_stack(1))
    rep = weighted_least_squares(expansion_target(v).samples(d.points, 1), d, basis)
    np.testing.assert_allclose(rep.coefficients, v.coefficients, atol=1e-10)


def test_least_squares_rank_deficient_minimum_norm():
    basis = legendre(3)
    d = EmpiricalDesign(np.array([0.3]), np.array([1.0]))
    rep = weighted_least_squares(np.array([2.0]), d, basis)
    b = eval_basis(basis, 0.3)
    np.testing.assert_allclose(rep.coefficients, 2.0 * b / (b @ b), atol=1e-12)
    assert rep.rank_deficient


def test_least_squares_shape_check():
    d = EmpiricalDesign(np.array([0.3]), np.array([1.0]), sobolev_stack(1))
    with pytest.raises(ValueError):
        weighted_least_squares(np.array([1.0]), d, legendre(2))


def test_least_squares_converges_to_projection():
    basis = legendre(10)
    u = runge(25)
    _, e = best_approximation_oracle(u, basis)
    rule = gauss_quadrature(400)
    d = EmpiricalDesign.draw(make_uniform(), 10**4, 2)
    coef = weighted_least_squares(u(d.points), d, basis).coefficients
    en = math.sqrt(rule.weights @ (u(rule.nodes) - eval_basis(basis, rule.nodes) @ coef) ** 2)
    assert en <= 1.05 * e


def test_oracle_refinement():
    basis = legendre(9)
    u = runge(25)
    _, e = best_approximation_oracle(u, basis, rule=gauss_quadrature(400))
    _, e_fine = best_approximation_oracle(u, basis, rule=gauss_quadrature(4000))
    assert e == pytest.approx(e_fine, rel=1e-6)


def test_oracle_sobolev_needs_target():
    with pytest.raises(ValueError):
        best_approximation_oracle(lambda y: y, legendre(3), sobolev_stack(1))


def test_l1_recovers_constant():
    rep = weighted_l1_interpolate(np.array([-0.4, 0.1, 0.8]), np.ones(3), legendre(6))
    np.testing.assert_allclose(rep.coefficients, np.eye(6)[0], atol=1e-9)
    assert rep.objective == pytest.approx(1.0)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_l1_matches_null_space_search(seed):
    rng = np.random.default_rng(seed)
    basis = legendre(3)
    x = rng.uniform(-1, 1, 2)
    y = rng.standard_normal(2)
    omega = rng.uniform(0.5, 3, 3)
    rep = weighted_l1_interpolate(x, y, basis, omega)
    B = eval_basis(basis, x)
    c0 = np.linalg.lstsq(B, y, rcond=None)[0]
    z = np.linalg.svd(B)[2][-1]
    # the objective is piecewise linear in t; its minimum sits at a kink
    kinks = [-c0[j] / z[j] for j in range(3) if abs(z[j]) > 1e-14]
    best = min(np.sum(omega * np.abs(c0 + t * z)) for t in kinks + [0.0])
    assert rep.objective == pytest.approx(best, abs=1e-5)
    assert rep.residual < 1e-8


def test_l1_vertex_enumeration():
    # tiny instance: compare with every basic solution
    rng = np.random.default_rng(3)
    basis = legendre(4)
    x = rng.uniform(-1, 1, 2)
    y = rng.standard_normal(2)
    B = eval_basis(basis, x)
    best = math.inf
    for S in itertools.combinations(range(4), 2):
        sub = B[:, S]
        if abs(np.linalg.det(sub)) < 1e-12:
            continue
        best = min(best, np.abs(np.linalg.solve(sub, y)).sum())
    rep = weighted_l1_interpolate(x, y, basis)
    assert rep.objective == pytest.approx(best, rel=1e-8)
    assert np.count_nonzero(np.abs(rep.coefficients) > 1e-10) <= 2


def test_l1_errors():
    with pytest.raises(InfeasibleError):
        weighted_l1_interpolate(np.array([0.2, 0.2]), np.array([0.0, 1.0]), legendre(3))
    with pytest.raises(ValueError):
        weighted_l1_interpolate(np.array([0.2]), np.array([0.0]), legendre(2), np.array([1.0, 0.0]))


def test_error_ratio_shape_and_determinism():
    basis = legendre(10)
    a = error_ratio_experiment(runge(25), basis, make_uniform(), 40, 10, seed=1)
    b = error_ratio_experiment(runge(25), basis, make_uniform(), 40, 10, seed=1)
    np.testing.assert_array_equal(a.ratios, b.ratios)
    assert np.all(a.ratios >= -1e-12)
    assert a.quantiles().shape == (3,)


def test_error_ratio_consistency_at_large_n():
    res = error_ratio_experiment(runge(25), legendre(10), make_uniform(), 10**4, 20, seed=2)
    assert np.median(res.ratios) < 0.01


def test_error_ratio_rejects_exact_targets():
    v = FunctionExpansion(legendre(3), np.array([1.0, 2.0, 0.0]))
    with pytest.raises(ValueError):
        error_ratio_experiment(expansion_target(v), legendre(3), make_uniform(), 10, 2)
