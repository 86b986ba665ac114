import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from riplab.bases import (DomainError, FunctionExpansion, basis_sup_norm, eval_basis,
                          eval_basis_derivatives, golden_section_max, legendre, sup_norms,
                          trigonometric, unit_vector)
from riplab.measure import gauss_quadrature


def test_legendre_values_at_one():
    np.testing.assert_allclose(eval_basis(legendre(3), 1.0), [1, math.sqrt(3), math.sqrt(5)], rtol=1e-15)


def test_legendre_first_derivative_at_zero():
    d = eval_basis_derivatives(legendre(2), 0.0, 1)
    np.testing.assert_allclose(d, [[1, 0], [0, math.sqrt(3)]], atol=1e-15)


def test_legendre_matches_numpy_legendre():
    y = np.linspace(-1, 1, 101)
    B = eval_basis(legendre(12), y)
    for j in range(12):
        ref = math.sqrt(2 * j + 1) * np.polynomial.legendre.legval(y, np.eye(12)[j])
        np.testing.assert_allclose(B[:, j], ref, atol=1e-12)


@pytest.mark.parametrize("kind", [legendre, trigonometric])
@pytest.mark.parametrize("domain", [(-1.0, 1.0), (0.0, 1.0), (2.0, 5.0)])
def test_derivatives_match_finite_differences(kind, domain):
    basis = kind(7, domain)
    a, b = domain
    y = np.linspace(a, b, 9)[1:-1]
    h = 1e-5 * (b - a)
    d = eval_basis_derivatives(basis, y, 2)
    fd1 = (eval_basis(basis, y + h) - eval_basis(basis, y - h)) / (2 * h)
    fd2 = (eval_basis(basis, y + h) - 2 * eval_basis(basis, y) + eval_basis(basis, y - h)) / h**2
    np.testing.assert_allclose(d[1], fd1, rtol=1e-6, atol=1e-6 * np.abs(d[1]).max())
    np.testing.assert_allclose(d[2], fd2, rtol=1e-3, atol=1e-3 * np.abs(d[2]).max())


@pytest.mark.parametrize("kind", [legendre, trigonometric])
@pytest.mark.parametrize("domain", [(-1.0, 1.0), (0.0, 1.0)])
def test_orthonormal(kind, domain):
    basis = kind(15, domain)
    rule = gauss_quadrature(80, domain)
    B = eval_basis(basis, rule.nodes)
    np.testing.assert_allclose((B * rule.weights[:, None]).T @ B, np.eye(15), atol=1e-12)


def test_shapes():
    basis = legendre(4)
    assert eval_basis(basis, 0.3).shape == (4,)
    assert eval_basis(basis, np.zeros((2, 3))).shape == (2, 3, 4)
    assert eval_basis_derivatives(basis, np.zeros(5), 2).shape == (3, 5, 4)


def test_domain_error():
    with pytest.raises(DomainError):
        eval_basis(legendre(3), 1.5)
    with pytest.raises(DomainError):
        eval_basis(trigonometric(3, (0, 1)), -0.1)


def test_invalid_arguments():
    with pytest.raises(ValueError):
        legendre(0)
    with pytest.raises(ValueError):
        legendre(3, (1.0, 1.0))
    with pytest.raises(ValueError):
        eval_basis_derivatives(legendre(3), 0.0, -1)


def test_sup_norms_legendre():
    assert basis_sup_norm(legendre(3), 1) == pytest.approx(math.sqrt(3), rel=1e-12)
    assert basis_sup_norm(legendre(3), 2) == pytest.approx(math.sqrt(5), rel=1e-12)
    np.testing.assert_allclose(sup_norms(legendre(8)), np.sqrt(2 * np.arange(8) + 1), rtol=1e-10)


def test_sup_norm_with_weight_uses_refinement():
    # sup of (1 - y^2) y^2 = 1/4 at y = 1/sqrt(2), off the grid
    val = basis_sup_norm(legendre(2), 1, weight=lambda y: (1 - y**2) / 3)
    assert val == pytest.approx(0.5, rel=1e-10)


def test_golden_section():
    x, fx = golden_section_max(lambda t: -(t - 0.3) ** 2, 0.0, 1.0)
    assert x == pytest.approx(0.3, abs=1e-6)
    assert fx == pytest.approx(0.0, abs=1e-12)


def test_expansion_arithmetic():
    basis = legendre(3)
    u, v = unit_vector(basis, 0), unit_vector(basis, 2)
    w = 2.0 * u - v
    np.testing.assert_allclose(w.coefficients, [2, 0, -1])
    assert w.l2_norm() == pytest.approx(math.sqrt(5))
    assert w(1.0) == pytest.approx(2 - math.sqrt(5))
    with pytest.raises(ValueError):
        FunctionExpansion(basis, np.ones(2))


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-3, 3), min_size=5, max_size=5), st.floats(-1, 1))
def test_expansion_is_linear(coefs, y):
    basis = legendre(5)
    v = FunctionExpansion(basis, np.array(coefs))
    expected = sum(c * unit_vector(basis, j)(y) for j, c in enumerate(coefs))
    assert float(v(y)) == pytest.approx(float(expected), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 20), st.floats(-1, 1))
def test_trigonometric_bounded_by_sqrt2(m, y):
    assert np.all(np.abs(eval_basis(trigonometric(m), y)) <= math.sqrt(2) + 1e-12)
