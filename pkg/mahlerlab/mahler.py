"""
Mahler measures of two-variable polynomials.

The primary path reduces the torus average to a single integral over x = e^{i theta}
with Jensen's formula,

    m(P) = 1/(2 pi) int_{-pi}^{pi} [ log|lead(x)| + sum_i log+|y_i(x)| ] d theta,

where y_i(x) are the roots of P(x, .). A tensor-product grid average of log|P| is kept
as an independent oracle, and Bosman's family has its own closed-form integrand.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, Literal

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike

from mahlerlab.exceptions import DomainError, LeadingCoefficientVanishes
from mahlerlab.polyfam import BivariatePolynomial, B_of, boyd_P, delta_of
from mahlerlab.quadrature import (
    DEFAULT_N_SCAN,
    DEFAULT_TOL,
    MAX_EVALUATIONS,
    Breakpoints,
    QuadratureResult,
    find_level_changes,
    find_sign_changes,
    integrate_adaptive,
)

LEAD_EPS = 1e-14
UNIT_CIRCLE_EPS = 1e-12
OUTSIDE_EPS = 1e-9
ABERTH_STEPS = 3
GRID_CHUNK = 256


# roots in y
# ----------
def _horner(coeffs: np.ndarray, y: np.ndarray) -> np.ndarray:
    """Row-wise polynomial values; ``coeffs`` is (n, d+1) lowest degree first, ``y`` is (n, m)."""
    acc = np.zeros(y.shape, dtype=complex)
    for j in range(coeffs.shape[-1] - 1, -1, -1):
        acc = acc * y + coeffs[:, j, None]
    return acc


def _horner_derivative(coeffs: np.ndarray, y: np.ndarray) -> np.ndarray:
    acc = np.zeros(y.shape, dtype=complex)
    for j in range(coeffs.shape[-1] - 1, 0, -1):
        acc = acc * y + j * coeffs[:, j, None]
    return acc


def _companion_roots(coeffs: np.ndarray) -> np.ndarray:
    """Eigenvalues of the stacked companion matrices; leading coefficients must be nonzero."""
    n, d = coeffs.shape[0], coeffs.shape[1] - 1
    monic = coeffs[:, :d] / coeffs[:, d, None]
    if d == 1:
        return -monic
    companion = np.zeros((n, d, d), dtype=complex)
    companion[:, np.arange(1, d), np.arange(d - 1)] = 1.0
    companion[:, :, d - 1] = -monic
    return np.linalg.eigvals(companion)


def _aberth_polish(coeffs: np.ndarray, roots: np.ndarray, steps: int = ABERTH_STEPS) -> np.ndarray:
    """Simultaneous Aberth-Ehrlich refinement; a step is kept only if it lowers the residual."""
    d = roots.shape[1]
    diagonal = np.arange(d)
    for _ in range(steps):
        values = _horner(coeffs, roots)
        with np.errstate(all="ignore"):
            ratio = values / _horner_derivative(coeffs, roots)
            diff = roots[:, :, None] - roots[:, None, :]
            diff[:, diagonal, diagonal] = np.inf
            repulsion = (1.0 / diff).sum(axis=2)
            candidate = roots - ratio / (1.0 - ratio * repulsion)
            better = np.isfinite(candidate) & (
                np.abs(_horner(coeffs, candidate)) <= np.abs(values)
            )
        roots = np.where(better, candidate, roots)
    return roots


def _lead_vanishes(coeffs: np.ndarray) -> np.ndarray:
    scale = np.abs(coeffs).max(axis=-1)
    return np.abs(coeffs[:, -1]) <= LEAD_EPS * scale


def roots_in_y(p: BivariatePolynomial, x: ArrayLike) -> np.ndarray:
    """All ``degree_y`` roots of p(x, .) with multiplicity.

    A scalar ``x`` gives a 1-d array of roots; an array gives shape ``(len(x), degree_y)``.
    """
    if p.degree_y < 1:
        raise DomainError("polynomial has no y-roots (degree_y = 0)")
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=complex)).ravel()
    coeffs = p.y_coefficients(xs)
    if np.any(_lead_vanishes(coeffs)):
        bad = xs[_lead_vanishes(coeffs)]
        raise LeadingCoefficientVanishes(f"leading y-coefficient vanishes at x = {bad[:3]}")
    roots = _aberth_polish(coeffs, _companion_roots(coeffs))
    return roots[0] if scalar else roots


# Jensen integrand
# ----------------
def _jensen_rows(coeffs: np.ndarray) -> np.ndarray:
    """log|lead| + sum log+|y_i| per coefficient row.

    Where the leading coefficient vanishes the escaping root and log|lead| combine
    into log|next coefficient|, so the row is recomputed with the top degree dropped.
    """
    out = np.empty(coeffs.shape[0])
    small = _lead_vanishes(coeffs)
    regular = ~small
    if np.any(regular):
        c = coeffs[regular]
        with np.errstate(divide="ignore"):
            values = np.log(np.abs(c[:, -1]))
        if c.shape[1] > 1:
            modulus = np.abs(_aberth_polish(c, _companion_roots(c)))
            values = values + np.where(
                modulus > 1 + UNIT_CIRCLE_EPS, np.log(np.maximum(modulus, 1.0)), 0.0
            ).sum(axis=1)
        out[regular] = values
    if np.any(small):
        if coeffs.shape[1] == 1:
            out[small] = -np.inf
        else:
            out[small] = _jensen_rows(coeffs[small, :-1])
    return out


def _count_rows(coeffs: np.ndarray) -> np.ndarray:
    out = np.zeros(coeffs.shape[0], dtype=int)
    if coeffs.shape[1] == 1:
        return out
    small = _lead_vanishes(coeffs)
    regular = ~small
    if np.any(regular):
        c = coeffs[regular]
        modulus = np.abs(_aberth_polish(c, _companion_roots(c)))
        out[regular] = (modulus > 1 + OUTSIDE_EPS).sum(axis=1)
    if np.any(small):
        out[small] = 1 + _count_rows(coeffs[small, :-1])
    return out


def jensen_integrand(p: BivariatePolynomial, theta: ArrayLike) -> np.ndarray:
    """J(theta) = log|lead(e^{i theta})| + sum_i log+|y_i(e^{i theta})|."""
    theta = np.asarray(theta, dtype=float)
    coeffs = p.y_coefficients(np.exp(1j * theta.ravel()))
    return _jensen_rows(coeffs).reshape(theta.shape)


def count_outside(p: BivariatePolynomial, theta: ArrayLike) -> np.ndarray:
    """Number of y-roots of p(e^{i theta}, .) strictly outside the unit circle."""
    theta = np.asarray(theta, dtype=float)
    coeffs = p.y_coefficients(np.exp(1j * theta.ravel()))
    return _count_rows(coeffs).reshape(theta.shape)


def jensen_breakpoints(p: BivariatePolynomial, n_scan: int = DEFAULT_N_SCAN) -> Breakpoints:
    """Zeros of the leading coefficient on the circle and angles where roots cross |y| = 1."""
    lead = p.x_polynomial(p.degree_y)
    angles = []
    if len(lead) > 1:
        for r in np.roots(lead):
            if abs(abs(r) - 1) < 1e-8:
                angles.append(abs(float(np.angle(r))))
    on_circle = Breakpoints.inside(0.0, math.pi, angles)
    crossings = find_level_changes(lambda t: count_outside(p, t), 0.0, math.pi, n_scan)
    return on_circle.merged(crossings, 0.0, math.pi)


def mahler_jensen(
    p: BivariatePolynomial,
    tol: float = DEFAULT_TOL,
    n_scan: int = DEFAULT_N_SCAN,
    max_evaluations: int = MAX_EVALUATIONS,
) -> QuadratureResult:
    """m(p) = (1/pi) int_0^pi J(theta) d theta (real coefficients make J even)."""
    breakpoints = jensen_breakpoints(p, n_scan)
    logger.debug(f"Jensen breakpoints for degree_y={p.degree_y}: {breakpoints.points}")
    result = integrate_adaptive(
        lambda t: jensen_integrand(p, t),
        0.0,
        math.pi,
        tol=math.pi * tol,
        breakpoints=breakpoints,
        max_evaluations=max_evaluations,
    )
    return result.scaled(1 / math.pi)


# direct torus average
# --------------------
def mahler_2d_grid(p: BivariatePolynomial, n: int) -> float:
    """Half-cell-offset n x n trapezoid average of log|p(e^{i a}, e^{i b})|."""
    if n < 16:
        raise DomainError(f"grid size must be at least 16, got {n}")
    angles = 2 * math.pi * (np.arange(n) + 0.5) / n
    x = np.exp(1j * angles)
    y_powers = np.exp(1j * np.outer(np.arange(p.degree_y + 1), angles))  # (d+1, n)
    partial_sums, included = [], 0
    for start in range(0, n, GRID_CHUNK):
        coeffs = p.y_coefficients(x[start:start + GRID_CHUNK])  # (chunk, d+1)
        modulus = np.abs(coeffs @ y_powers)
        keep = modulus >= 1e-300
        partial_sums.append(float(np.log(modulus[keep]).sum()))
        included += int(keep.sum())
    if included < n * n:
        logger.debug(f"Skipped {n * n - included} grid points with |p| < 1e-300")
    return math.fsum(partial_sums) / included


# Bosman's family through the closed-form root
# --------------------------------------------
def q_integrand_closed(k: float, theta: ArrayLike) -> np.ndarray:
    """log|Y_1(e^{i theta})| = log((|B| + sqrt(Delta))/2) where Delta > 0, else 0."""
    b = B_of(k, theta)
    delta = b * b - 4.0
    positive = delta > 0
    root = np.sqrt(np.where(positive, delta, 0.0))
    return np.where(positive, np.log((np.abs(b) + root) / 2), 0.0)


@lru_cache(maxsize=None)
def bosman_gt(k: float, tol: float = DEFAULT_TOL, n_scan: int = DEFAULT_N_SCAN) -> QuadratureResult:
    """g~(k) = m(Q_k) from the closed-form integrand, split at the sign changes of Delta."""
    breakpoints = find_sign_changes(lambda t: delta_of(k, t), 0.0, math.pi, n_scan)
    result = integrate_adaptive(
        lambda t: q_integrand_closed(k, t),
        0.0,
        math.pi,
        tol=math.pi * tol,
        breakpoints=breakpoints,
    )
    return result.scaled(1 / math.pi)


@lru_cache(maxsize=None)
def boyd_g(k: float, tol: float = DEFAULT_TOL) -> QuadratureResult:
    """g(k) = m(P_{2-k})."""
    return mahler_jensen(boyd_P(2 - k), tol=tol)


# finite differences
# ------------------
def richardson_derivative(
    fn: Callable[[float], float],
    k: float,
    h: float = 1e-3,
    side: Literal["central", "backward", "forward"] = "central",
) -> float:
    """Second-order difference quotient with one Richardson step (error O(h^4) central, O(h^3) one-sided)."""

    def quotient(step: float) -> float:
        match side:
            case "central":
                return (fn(k + step) - fn(k - step)) / (2 * step)
            case "backward":
                return (3 * fn(k) - 4 * fn(k - step) + fn(k - 2 * step)) / (2 * step)
            case "forward":
                return (-3 * fn(k) + 4 * fn(k + step) - fn(k + 2 * step)) / (2 * step)
            case _:
                raise DomainError(f"unknown difference side: {side}")

    return (4 * quotient(h / 2) - quotient(h)) / 3
