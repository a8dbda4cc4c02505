import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from beq import BlaschkeProduct, critical_points, derivative, evaluate, lifted_argument
from beq.blaschke import critical_numerator_coeffs, reflected_residual
from beq.errors import DegenerateOrigin

from conftest import random_product

zero_strategy = st.builds(
    lambda r, t: r * complex(math.cos(t), math.sin(t)),
    st.floats(0.0, 0.95), st.floats(0.0, 2 * math.pi),
)
products = st.builds(
    lambda zs, phase: BlaschkeProduct(zs, complex(math.cos(phase), math.sin(phase))),
    st.lists(zero_strategy, min_size=1, max_size=7), st.floats(0.0, 2 * math.pi),
)


def direct(B, z):
    out = B.leading_coefficient
    for a in B.zeros:
        out = out * (z - a) / (1 - np.conj(a) * z)
    return out


def test_construction_checks():
    with pytest.raises(ValueError):
        BlaschkeProduct([1.0])
    with pytest.raises(ValueError):
        BlaschkeProduct([0.1], 2.0)
    with pytest.raises(ValueError):
        BlaschkeProduct([])


def test_equality_and_monic():
    B = BlaschkeProduct([0.1, 0.2j], 1j)
    assert B == BlaschkeProduct([0.1, 0.2j], 1j)
    assert B != B.monic()
    assert B.monic().is_monic and B.degree == 2


@settings(max_examples=50, deadline=None)
@given(products)
def test_evaluate_matches_product_and_is_unimodular_on_circle(B):
    z = np.array([0.1 + 0.2j, -0.5j, 0.7])
    assert np.allclose(evaluate(B, z), direct(B, z))
    t = np.linspace(0, 2 * math.pi, 17)
    assert np.allclose(np.abs(evaluate(B, np.exp(1j * t))), 1.0)


@settings(max_examples=50, deadline=None)
@given(products)
def test_derivative_matches_finite_difference(B):
    z = np.array([0.3 - 0.1j, -0.2 + 0.4j, 1.5j])
    h = 1e-6
    fd = (evaluate(B, z + h) - evaluate(B, z - h)) / (2 * h)
    assert np.allclose(derivative(B, z), fd, rtol=1e-5, atol=1e-6)


def test_numerator_coefficients_vanish_at_critical_points(fig2):
    crit = critical_points(fig2)
    N = critical_numerator_coeffs(fig2)
    assert N.size == 2 * fig2.degree - 1
    scale = np.polyval(np.abs(N), np.abs(crit.all))
    assert np.all(np.abs(np.polyval(N, crit.all)) < 1e-12 * scale)


def test_figure2_critical_points_are_critical(fig2):
    crit = critical_points(fig2)
    assert crit.inside.size == crit.outside.size == 4
    assert np.all(np.abs(derivative(fig2, crit.inside)) < 1e-12)
    assert np.allclose(crit.outside, 1 / np.conj(crit.inside))
    assert np.all(crit.residuals < 1e-9)


def test_degree_one_has_no_critical_points():
    assert len(critical_points(BlaschkeProduct([0.3 + 0.1j]))) == 0


def test_degenerate_origin_is_reported():
    with pytest.raises(DegenerateOrigin):
        critical_points(BlaschkeProduct([0.0, 0.0]))
    with pytest.raises(DegenerateOrigin):
        critical_points(BlaschkeProduct([0.5, -0.5]))


def test_zero_at_origin_is_fine():
    B = BlaschkeProduct([0.0, 0.4 + 0.3j, -0.6j])
    crit = critical_points(B)
    assert crit.inside.size == 2
    assert np.all(np.abs(derivative(B, crit.inside)) < 1e-12)


def test_double_zero_is_a_critical_point():
    B = BlaschkeProduct([0.3, 0.3, 0.5j])
    crit = critical_points(B)
    assert np.min(np.abs(crit.inside - 0.3)) < 1e-6


def test_near_boundary_zeros():
    B = BlaschkeProduct([0.99997, 0.5j, -0.3 - 0.2j, 0.999 * np.exp(2j)])
    crit = critical_points(B)
    assert crit.inside.size == 3 and np.all(np.abs(crit.inside) < 1)


def test_reflected_residual_is_small_outside(fig2):
    crit = critical_points(fig2)
    assert np.all(reflected_residual(fig2, crit.outside) < 1e-12)


@settings(max_examples=30, deadline=None)
@given(products)
def test_lifted_argument_against_unwrap(B):
    phi = lifted_argument(B)
    t = np.linspace(0, 2 * math.pi, 4001)
    oracle = np.unwrap(np.angle(evaluate(B, np.exp(1j * t))))
    oracle += phi.alpha - oracle[0]
    assert np.allclose(phi(t), oracle, atol=1e-9)
    assert phi(2 * math.pi) - phi(0.0) == pytest.approx(2 * math.pi * B.degree)
    assert -math.pi <= phi.alpha < math.pi


@settings(max_examples=30, deadline=None)
@given(products)
def test_lifted_argument_derivative_and_inverse(B):
    phi = lifted_argument(B)
    t = np.linspace(0.1, 6.0, 13)
    assert np.allclose(phi.derivative(t), np.abs(derivative(B, np.exp(1j * t))))
    y = phi.alpha + np.linspace(0, 2 * math.pi * B.degree, 9, endpoint=False)
    assert np.allclose(phi(phi.inverse(y)), y, atol=1e-11)


def test_lifted_argument_is_periodic_beyond_one_turn(fig1):
    phi = lifted_argument(fig1)
    t = np.array([-1.0, 0.5, 3.0])
    assert np.allclose(phi(t + 2 * math.pi), phi(t) + 2 * math.pi * fig1.degree)


def test_figure1_alpha(fig1):
    assert lifted_argument(fig1).alpha == pytest.approx(-math.pi / 2, abs=1e-12)
    assert evaluate(fig1, 1.0) == pytest.approx(-1j)


def test_walsh_counts_for_random_products():
    rng = np.random.default_rng(3)
    for _ in range(50):
        B = random_product(rng, int(rng.integers(2, 9)), monic=False)
        crit = critical_points(B)
        assert crit.inside.size == B.degree - 1
        assert np.all(np.abs(crit.outside) > 1)
