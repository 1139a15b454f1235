import math

import numpy as np
import pytest
from conftest import LPRIME_CHI3, LPRIME_CHI4

from mahlerlab import hyperg
from mahlerlab.exceptions import DomainError, LeadingCoefficientVanishes
from mahlerlab.mahler import (
    bosman_gt,
    boyd_g,
    count_outside,
    jensen_breakpoints,
    jensen_integrand,
    mahler_2d_grid,
    mahler_jensen,
    q_integrand_closed,
    richardson_derivative,
    roots_in_y,
)
from mahlerlab.polyfam import BivariatePolynomial, Family, bosman_Q, bosman_Q_tilde, boyd_P, family_polynomial, monomial

ONE_X_Y = BivariatePolynomial.from_terms({(0, 0): 1, (1, 0): 1, (0, 1): 1})


def test_roots_in_y():
    assert roots_in_y(ONE_X_Y, 0.5) == pytest.approx([-1.5])
    roots = roots_in_y(boyd_P(3), np.array([0.2, 1j]))
    assert roots.shape == (2, 2)
    for x, row in zip((0.2, 1j), roots):
        np.testing.assert_allclose(boyd_P(3)(x, row), 0, atol=1e-12)


def test_roots_in_y_errors():
    with pytest.raises(LeadingCoefficientVanishes):
        roots_in_y(boyd_P(1), -1.0)
    with pytest.raises(DomainError):
        roots_in_y(monomial(3, 1, 0), 0.5)


def test_jensen_integrand_and_count():
    # roots y = -(1 + x): |1 + e^{i theta}| = 2 cos(theta / 2)
    theta = np.array([0.0, math.pi / 2, 3 * math.pi / 4])
    np.testing.assert_allclose(
        jensen_integrand(ONE_X_Y, theta), [math.log(2), math.log(math.sqrt(2)), 0.0], atol=1e-14
    )
    assert list(count_outside(ONE_X_Y, theta)) == [1, 1, 0]
    assert jensen_breakpoints(ONE_X_Y).points == pytest.approx((2 * math.pi / 3,), abs=1e-8)


def test_jensen_integrand_where_lead_vanishes():
    # lead x + 1 of P_k vanishes at theta = pi; the truncated row is the limit
    near = jensen_integrand(boyd_P(3), np.array([math.pi - 1e-7]))
    at = jensen_integrand(boyd_P(3), np.array([math.pi]))
    assert np.isfinite(at).all()
    assert at[0] == pytest.approx(near[0], abs=1e-5)


def test_smyth_measure():
    result = mahler_jensen(ONE_X_Y)
    assert result.converged
    assert result.value == pytest.approx(LPRIME_CHI3, abs=1e-10)


@pytest.mark.parametrize("c", [2.0, -5.0, 0.25])
def test_monomials(c):
    assert mahler_jensen(monomial(c, 1, 1)).value == pytest.approx(math.log(abs(c)), abs=1e-12)
    assert mahler_jensen(monomial(c)).value == pytest.approx(math.log(abs(c)), abs=1e-12)


def test_linear_in_y():
    assert mahler_jensen(monomial(1, 0, 1) - monomial(2)).value == pytest.approx(math.log(2), abs=1e-12)


def test_grid_oracle():
    assert mahler_2d_grid(ONE_X_Y, 256) == pytest.approx(LPRIME_CHI3, abs=1e-3)
    with pytest.raises(DomainError):
        mahler_2d_grid(ONE_X_Y, 8)


FAMILY_SAMPLES = [
    (Family.BOYD_P, -3.0),
    (Family.BOYD_P, 1.0),
    (Family.BOYD_P, 5.0),
    (Family.BOSMAN_Q, -2.0),
    (Family.BOSMAN_Q, 2.0),
    (Family.BOSMAN_Q, 6.0),
    (Family.T3_P, -1.0),
    (Family.T3_P, 1.0),
    (Family.T3_P, 4.0),
    (Family.T3_Q, 0.5),
    (Family.T3_Q, 3.0),
    (Family.T3_Q, 6.0),
    (Family.T3_R, 1.0),
    (Family.T3_R, 2.0),
    (Family.T3_R, 5.0),
]


@pytest.mark.parametrize("family, k", FAMILY_SAMPLES)
def test_jensen_agrees_with_grid(family, k):
    p = family_polynomial(family, k)
    result = mahler_jensen(p)
    assert abs(mahler_2d_grid(p, 1024) - result.value) <= max(1e-4, 3 * result.error_estimate)


@pytest.mark.parametrize("family, k", FAMILY_SAMPLES)
def test_jensen_integrand_is_even(rng, family, k):
    p = family_polynomial(family, k)
    theta = rng.uniform(0.0, math.pi, size=257)
    np.testing.assert_allclose(jensen_integrand(p, theta), jensen_integrand(p, -theta), rtol=0, atol=1e-12)


@pytest.mark.parametrize("k", [-8.0, -4.0, -2.0, 1.0, 2.0, 3.0])
def test_roots_of_q_tilde_multiply_to_one(k):
    theta = np.linspace(0.0, math.pi, 1001)
    roots = roots_in_y(bosman_Q_tilde(k), np.exp(1j * theta))
    np.testing.assert_allclose(roots.prod(axis=1), 1.0, rtol=0, atol=1e-10)


def test_grid_error_decays_with_n():
    # 2.02 + x + y has no zeros on the torus; its measure is log 2.02
    p = BivariatePolynomial.from_terms({(0, 0): 2.02, (1, 0): 1, (0, 1): 1})
    reference = mahler_jensen(p).value
    assert reference == pytest.approx(math.log(2.02), abs=1e-10)
    errors = [abs(mahler_2d_grid(p, n) - reference) for n in (64, 128, 256, 512)]
    assert all(later <= earlier for earlier, later in zip(errors, errors[1:]))
    assert errors[-1] < 1e-8


def test_zero_measures():
    assert boyd_g(0.0).value == pytest.approx(0.0, abs=1e-8)
    assert bosman_gt(0.0).value == pytest.approx(0.0, abs=1e-9)


def test_closed_integrand_vanishes_inside_band():
    # k = 2: B = s^2 + 2s + 2 >= 1 with |B| <= 2 near s = -1
    theta = np.array([2 * math.pi / 3])
    assert q_integrand_closed(2.0, theta)[0] == 0.0


@pytest.mark.parametrize("k", [-4.0, 2.0])
def test_closed_form_matches_jensen(k):
    assert bosman_gt(k).value == pytest.approx(mahler_jensen(bosman_Q(k)).value, abs=1e-8)


@pytest.mark.parametrize("k, c", [(2.0, 2.0), (1.0, 2.0), (-2.0, 1.0), (-8.0, 1.0)])
def test_measure_identity(k, c):
    assert bosman_gt(k).value == pytest.approx(c * boyd_g(k).value, abs=1e-7)


def test_bosman_dirichlet_values():
    assert bosman_gt(-1.0).value == pytest.approx(2 * LPRIME_CHI3, abs=1e-7)
    assert bosman_gt(8.0).value == pytest.approx(4 * LPRIME_CHI4, abs=1e-7)


def test_constant_term_expansion():
    assert boyd_g(20.0).value == pytest.approx(hyperg.boyd_series(20.0), abs=1e-8)


def test_richardson_derivative():
    assert richardson_derivative(np.exp, 0.0) == pytest.approx(1.0, abs=1e-10)
    assert richardson_derivative(np.sin, 1.0, side="backward") == pytest.approx(math.cos(1.0), abs=1e-7)
    assert richardson_derivative(np.sin, 1.0, side="forward") == pytest.approx(math.cos(1.0), abs=1e-7)
    with pytest.raises(DomainError):
        richardson_derivative(np.exp, 0.0, side="sideways")


@pytest.mark.slow
def test_finite_difference_of_measure():
    fd = richardson_derivative(lambda t: boyd_g(t, 1e-12).value, -4.0)
    assert fd == pytest.approx(hyperg.dg_dk(-4.0), abs=1e-6)
