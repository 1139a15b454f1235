import numpy as np
import pytest

from mahlerlab.exceptions import ConfigurationError, DomainError
from mahlerlab.polyfam import (
    B_of,
    BivariatePolynomial,
    Family,
    FamilyPoint,
    bosman_Q,
    bosman_Q_tilde,
    boyd_P,
    boyd_P_factored,
    boyd_P_tilde_eval,
    delta_factored,
    delta_of,
    eval_bosman_Q_tilde,
    evaluate,
    family_polynomial,
    monomial,
    thm3_P,
    thm3_Q,
    thm3_R,
)


def torus_points(rng, n=32):
    return np.exp(2j * np.pi * rng.random(n)), np.exp(2j * np.pi * rng.random(n))


@pytest.mark.parametrize("k", [-8, -2, 0, 1, 2, 4, 0.5, -1.5])
def test_boyd_expanded_matches_factored(k):
    assert boyd_P(k).as_dict() == boyd_P_factored(k).as_dict()


def test_boyd_P_coefficients():
    p = boyd_P(3)
    assert p.degree_y == 2
    assert p.degree_x == 2
    assert p.coefficient(1, 1) == 3
    assert p.coefficient(0, 0) == 0
    assert isinstance(p.coefficient(1, 1), int)
    assert list(p.x_polynomial(2)) == [1, 1]  # x + 1


def test_boyd_tilde_relation(rng):
    x, y = torus_points(rng)
    k = 1.7
    lhs = boyd_P(k)(x * x, y * y)
    rhs = x * x * y * y * boyd_P_tilde_eval(2 - k, x, y)
    np.testing.assert_allclose(lhs, rhs, atol=1e-12)


@pytest.mark.parametrize("k", [-4, 2, 8, 0.3])
def test_bosman_tilde_relations(rng, k):
    x, y = torus_points(rng)
    laurent = eval_bosman_Q_tilde(k, x, y)
    np.testing.assert_allclose(bosman_Q_tilde(k)(x, y), x * x * laurent, atol=1e-12)
    # Q_k(X, X^2 Y) = X^4 Q~_k(X, Y)
    np.testing.assert_allclose(bosman_Q(k)(x, x * x * y), x**4 * laurent, atol=1e-11)


def test_bosman_Q_is_palindromic_in_x():
    p = bosman_Q(5)
    assert [int(c) for c in p.x_polynomial(1)] == [1, 5, 10, 5, 1]
    assert p.coefficient(4, 0) == 1
    assert p.coefficient(0, 2) == 1


def test_thm3_families():
    assert thm3_R(2).degree_y == 3
    assert thm3_R(2).coefficient(1, 1) == 2
    assert thm3_P(1).coefficient(2, 1) == 1
    assert thm3_Q(6).coefficient(2, 1) == 8  # 2k - 4
    assert thm3_Q(2).coefficient(2, 1) == 0


def test_delta_factored_matches_definition():
    theta = np.linspace(-np.pi, np.pi, 101)
    for k in (-8.0, -1.0, 2.0, 6.5):
        np.testing.assert_allclose(delta_factored(k, theta), delta_of(k, theta), atol=1e-10)
        np.testing.assert_allclose(delta_of(k, theta), B_of(k, theta) ** 2 - 4, atol=1e-12)


def test_B_of_at_theta_zero():
    # X + 1/X = 2 at theta = 0
    assert B_of(3.0, 0.0) == pytest.approx(4 + 6 + 6 - 2)


def test_theta_outside_range():
    with pytest.raises(DomainError):
        B_of(1.0, 4.0)


def test_arithmetic():
    x_plus_y = BivariatePolynomial.from_terms({(1, 0): 1, (0, 1): 1})
    square = x_plus_y * x_plus_y
    assert square.as_dict() == {(0, 2): 1, (1, 1): 2, (2, 0): 1}
    assert (square + monomial(-2, 1, 1)).as_dict() == {(0, 2): 1, (2, 0): 1}
    assert (2 * x_plus_y).as_dict() == {(1, 0): 2, (0, 1): 2}


def test_zero_polynomial_rejected():
    with pytest.raises(ValueError):
        BivariatePolynomial.from_terms({(1, 1): 0})
    with pytest.raises(ValueError):
        monomial(1, 1, 1) - monomial(1, 1, 1)


def test_evaluate_and_y_coefficients():
    p = boyd_P(1)
    x, y = 0.3 + 0.2j, -1.1 + 0.4j
    direct = (x + 1) * y * y + (x * x + x + 1) * y + x * x + x
    assert evaluate(p, x, y) == pytest.approx(direct)
    assert p(x, y) == pytest.approx(direct)
    np.testing.assert_allclose(p.y_coefficients(x), [x * x + x, x * x + x + 1, x + 1])


def test_family_factory():
    assert family_polynomial("boydP", 3) == boyd_P(3)
    assert family_polynomial(Family.T3_R, 2) == thm3_R(2)
    with pytest.raises(ConfigurationError):
        family_polynomial("nope", 1)


@pytest.mark.parametrize("k, degenerate", [(8, True), (-1, True), (0, True), (4, True), (2, False)])
def test_family_point_degenerate(k, degenerate):
    point = FamilyPoint.make("bosmanQ", k)
    assert point.degenerate is degenerate
    assert point.polynomial() == bosman_Q(k)


@pytest.mark.parametrize("low, high", [(-10.0, -1.0), (1e-3, 10.0)])
def test_sign_of_B_follows_k_where_delta_positive(rng, low, high):
    theta = np.linspace(-np.pi, np.pi, 4001)[1:-1]
    for k in rng.uniform(low, high, size=40):
        positive = delta_of(k, theta) > 0
        assert np.all(np.sign(B_of(k, theta[positive])) == np.sign(k))
    # the endpoint k = 10 of the positive range
    positive = delta_of(10.0, theta) > 0
    assert positive.any()
    assert np.all(B_of(10.0, theta[positive]) > 0)
