import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from numpy.polynomial import Polynomial

from grprec.poly import (
    ReconstructionPolynomial,
    basis_values,
    gauss_legendre,
    nodal_to_modal,
    poly_cell_mean,
    poly_derivative,
    poly_eval,
)

coeff_lists = st.lists(st.floats(-10, 10), min_size=1, max_size=5)


def test_one_point_rule():
    rule = gauss_legendre(1)
    assert rule.nodes.tolist() == [0.5]
    assert rule.weights.tolist() == [1.0]


def test_two_point_nodes():
    rule = gauss_legendre(2)
    np.testing.assert_allclose(rule.nodes, [0.5 - 0.5 / np.sqrt(3), 0.5 + 0.5 / np.sqrt(3)], atol=1e-15)


def test_three_point_rule_integrates_quintic():
    assert abs(gauss_legendre(3).integrate(lambda x: x**5) - 1 / 6) < 1e-15


@pytest.mark.parametrize("n", [0, 11])
def test_rule_size_is_bounded(n):
    with pytest.raises(ValueError):
        gauss_legendre(n)


def test_constant_polynomial():
    p = ReconstructionPolynomial(np.array([2.5, 0.0, 0.0]), dx=0.3)
    np.testing.assert_allclose(poly_eval(p, np.linspace(0, 1, 7)), 2.5)
    np.testing.assert_allclose(poly_derivative(p, 1).coeffs, 0.0)


def test_linear_polynomial_slope():
    # xi = 1/2 + phi_1 / 2
    p = ReconstructionPolynomial(np.array([0.5, 0.5]), dx=1.0)
    np.testing.assert_allclose(poly_eval(p, [0.0, 0.3, 1.0]), [0.0, 0.3, 1.0], atol=1e-15)
    np.testing.assert_allclose(poly_eval(poly_derivative(p, 1), [0.0, 0.7]), 1.0)


def test_mean_of_square():
    # xi^2 = 1/3 + phi_1/2 + phi_2/6
    p = ReconstructionPolynomial(np.array([1 / 3, 0.5, 1 / 6]))
    np.testing.assert_allclose(poly_eval(p, [0.2, 0.9]), [0.04, 0.81], atol=1e-15)
    assert abs(poly_cell_mean(p) - 1 / 3) < 1e-15


def test_derivative_uses_physical_units():
    p = ReconstructionPolynomial(np.array([0.5, 0.5]), dx=0.25)
    np.testing.assert_allclose(poly_eval(poly_derivative(p, 1), 0.5), 4.0)


def test_basis_orthogonality():
    rule = gauss_legendre(10)
    V = basis_values(rule.nodes, 6)
    gram = (V * rule.weights[:, None]).T @ V
    off = gram - np.diag(np.diag(gram))
    assert np.max(np.abs(off)) < 1e-14
    np.testing.assert_allclose(np.diag(gram), 1 / (2 * np.arange(7) + 1), rtol=1e-13)


@given(coeff_lists)
def test_modal_nodal_round_trip(coeffs):
    c = np.array(coeffs)
    m = len(c) - 1
    nodes = gauss_legendre(m + 1).nodes
    back = nodal_to_modal(basis_values(nodes, m) @ c, m)
    np.testing.assert_allclose(back, c, atol=1e-12 * (1 + np.abs(c).max()))


@given(coeff_lists, st.floats(-1.0, 0.5), st.floats(0.1, 1.5))
def test_sub_interval_mean_against_power_basis(coeffs, a, width):
    c = np.array(coeffs)
    p = ReconstructionPolynomial(c)
    # independent oracle: convert to the power basis and integrate analytically
    m = len(c) - 1
    xs = np.linspace(-1, 2, m + 3)
    power = Polynomial.fit(xs, poly_eval(p, xs), m).convert()
    anti = power.integ()
    b = a + width
    expected = (anti(b) - anti(a)) / width
    assert abs(poly_cell_mean(p, a, b) - expected) < 1e-10 * (1 + np.abs(c).max())
