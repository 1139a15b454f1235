import math

import numpy as np
import pytest

from mahlerlab.exceptions import DomainError, NonFiniteIntegrand
from mahlerlab.quadrature import (
    GAUSS_WEIGHTS,
    KRONROD_WEIGHTS,
    NODES,
    Breakpoints,
    QuadratureResult,
    find_level_changes,
    find_sign_changes,
    integrate_adaptive,
    integrate_to_minus_infinity,
)


def test_rule_weights():
    assert KRONROD_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    assert GAUSS_WEIGHTS.sum() == pytest.approx(2.0, abs=1e-15)
    np.testing.assert_allclose(NODES, -NODES[::-1], atol=0)
    # Gauss nodes carry weight only at odd positions and the centre
    assert np.count_nonzero(GAUSS_WEIGHTS) == 7


@pytest.mark.parametrize(
    "f, a, b, exact",
    [
        (lambda x: x * x, 0.0, 1.0, 1 / 3),
        (np.exp, -1.0, 2.0, math.exp(2) - math.exp(-1)),
        (lambda x: 1 / np.sqrt(x), 0.0, 1.0, 2.0),
        (np.log, 0.0, 1.0, -1.0),
        (lambda t: 1 / np.sqrt(t * (1 - t)), 0.0, 1.0, math.pi),
        (lambda x: np.log(np.abs(np.cos(x))), 0.0, math.pi, -math.pi * math.log(2)),
    ],
)
def test_integrate_adaptive(f, a, b, exact):
    bps = Breakpoints.inside(a, b, [math.pi / 2]) if b == math.pi else None
    result = integrate_adaptive(f, a, b, tol=1e-11, breakpoints=bps)
    assert result.converged
    assert result.value == pytest.approx(exact, abs=1e-9)
    assert result.evaluations > 0
    assert abs(result.value - exact) <= 10 * result.error_estimate


SMOOTH = [
    (np.exp, -1.0, 2.0),
    (lambda x: 1 / (1 + x * x), -3.0, 5.0),
    (lambda x: np.sin(3 * x) * np.cos(x), 0.0, math.pi),
]


@pytest.mark.parametrize("f, a, b", SMOOTH)
def test_redundant_breakpoints(rng, f, a, b):
    tol = 1e-11
    plain = integrate_adaptive(f, a, b, tol=tol)
    split = integrate_adaptive(f, a, b, tol=tol, breakpoints=Breakpoints.inside(a, b, rng.uniform(a, b, size=5)))
    assert plain.converged and split.converged
    assert abs(plain.value - split.value) <= 2 * tol


@pytest.mark.parametrize("f, a, b", SMOOTH)
def test_split_interval_additivity(rng, f, a, b):
    c = rng.uniform(a + 0.1, b - 0.1)
    whole = integrate_adaptive(f, a, b)
    left, right = integrate_adaptive(f, a, c), integrate_adaptive(f, c, b)
    combined = whole.error_estimate + left.error_estimate + right.error_estimate
    assert abs(whole.value - (left.value + right.value)) <= 2 * combined


def test_breakpoint_kink():
    bps = Breakpoints.inside(0.0, math.pi, [math.pi / 2])
    result = integrate_adaptive(lambda x: np.abs(np.cos(x)), 0.0, math.pi, breakpoints=bps)
    assert result.value == pytest.approx(2.0, abs=1e-10)


def test_scalar_integrand():
    result = integrate_adaptive(math.exp, 0.0, 1.0, vectorized=False)
    assert result.value == pytest.approx(math.e - 1, abs=1e-10)


def test_minus_infinity():
    result = integrate_to_minus_infinity(lambda v: (1 - v) ** -1.5, 0.0, tol=1e-11)
    assert result.value == pytest.approx(2.0, abs=1e-9)
    result = integrate_to_minus_infinity(lambda v: 1 / (1 + v * v), 0.0, tol=1e-11)
    assert result.value == pytest.approx(math.pi / 2, abs=1e-9)


def test_budget_exhausted():
    result = integrate_adaptive(lambda x: np.sin(200 * x), 0.0, 10.0, tol=1e-12, max_evaluations=60)
    assert not result.converged
    assert result.error_estimate > 1e-12


def test_nan_integrand():
    with pytest.raises(NonFiniteIntegrand):
        integrate_adaptive(lambda x: np.full_like(x, np.nan), 0.0, 1.0)


def test_bad_limits():
    with pytest.raises(DomainError):
        integrate_adaptive(np.exp, 1.0, 1.0)
    with pytest.raises(DomainError):
        integrate_adaptive(np.exp, 0.0, 1.0, breakpoints=Breakpoints((0.5, 2.0)))


def test_breakpoints():
    bps = Breakpoints.inside(0.0, 1.0, [0.5 + 1e-14, 0.5, 0.0, 1.0, 2.0, 0.25])
    assert bps.points == (0.25, 0.5)
    assert len(bps) == 2
    assert bps.merged(Breakpoints((0.75,)), 0.0, 1.0).points == (0.25, 0.5, 0.75)
    with pytest.raises(ValueError):
        Breakpoints((0.5, 0.2))


def test_result_arithmetic():
    a = QuadratureResult(1.0, 1e-12, 15, True)
    b = QuadratureResult(2.0, 3e-12, 45, False)
    total = a + b
    assert total.value == 3.0
    assert total.error_estimate == pytest.approx(4e-12)
    assert total.evaluations == 60
    assert not total.converged
    assert a.scaled(-2.0).value == -2.0
    assert a.scaled(-2.0).error_estimate == pytest.approx(2e-12)


def test_find_sign_changes():
    bps = find_sign_changes(np.cos, 0.0, math.pi, n_scan=64)
    assert bps.points == pytest.approx((math.pi / 2,), abs=1e-12)
    assert len(find_sign_changes(lambda x: x * x + 1, -1.0, 1.0)) == 0


def test_find_level_changes():
    bps = find_level_changes(lambda t: (t > 0.3).astype(int) + (t > 0.7).astype(int), 0.0, 1.0, n_scan=64)
    assert bps.points == pytest.approx((0.3, 0.7), abs=1e-12)
    with pytest.raises(DomainError):
        find_level_changes(lambda t: t, 0.0, 1.0, n_scan=1)
