"""
One-dimensional adaptive quadrature with error estimates.

Every integral is split at caller-supplied breakpoints; each segment is mapped to
s in [0, 1] by x = a + (b - a)(3s^2 - 2s^3), which turns integrable inverse-square-root
endpoint behaviour into an analytic integrand, and is then integrated with nested
15-point Kronrod / 7-point Gauss panels under global bisection of the worst panel.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from mahlerlab.exceptions import DomainError, NonFiniteIntegrand

DEFAULT_TOL = 1e-10
MAX_EVALUATIONS = 2_000_000
DEFAULT_N_SCAN = 4096
BISECTION_WIDTH = 1e-13
MIN_PANEL_WIDTH = 1e-13  # in the smoothing variable s
MERGE_DISTANCE = 1e-12

# Kronrod nodes on [0, 1] (descending) and weights; odd entries are the Gauss nodes
_XGK = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_WGK = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_WG = np.array([
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
])

NODES = np.concatenate((-_XGK[:7], [0.0], _XGK[6::-1]))
KRONROD_WEIGHTS = np.concatenate((_WGK[:7], [_WGK[7]], _WGK[6::-1]))
GAUSS_WEIGHTS = np.zeros(15)
for _i, _w in zip((1, 3, 5), _WG[:3]):
    GAUSS_WEIGHTS[_i] = _w
    GAUSS_WEIGHTS[14 - _i] = _w
GAUSS_WEIGHTS[7] = _WG[3]


@dataclass(frozen=True)
class QuadratureResult:
    value: float
    error_estimate: float
    evaluations: int
    converged: bool

    def __post_init__(self):
        if self.error_estimate < 0:
            raise ValueError("error estimate must be non-negative")

    def __add__(self, other: "QuadratureResult") -> "QuadratureResult":
        return QuadratureResult(
            value=self.value + other.value,
            error_estimate=self.error_estimate + other.error_estimate,
            evaluations=self.evaluations + other.evaluations,
            converged=self.converged and other.converged,
        )

    def scaled(self, factor: float) -> "QuadratureResult":
        return QuadratureResult(
            value=factor * self.value,
            error_estimate=abs(factor) * self.error_estimate,
            evaluations=self.evaluations,
            converged=self.converged,
        )


@dataclass(frozen=True)
class Breakpoints:
    points: Tuple[float, ...] = ()

    def __post_init__(self):
        if any(b <= a for a, b in zip(self.points, self.points[1:])):
            raise ValueError("breakpoints must be strictly increasing")

    @classmethod
    def inside(cls, a: float, b: float, candidates: Iterable[float]) -> "Breakpoints":
        """Sort, merge near-duplicates and keep only points strictly interior to (a, b)."""
        kept: List[float] = []
        for x in sorted(float(c) for c in candidates):
            if not (a + MERGE_DISTANCE < x < b - MERGE_DISTANCE):
                continue
            if kept and x - kept[-1] <= MERGE_DISTANCE:
                continue
            kept.append(x)
        return cls(points=tuple(kept))

    def merged(self, other: "Breakpoints", a: float, b: float) -> "Breakpoints":
        return Breakpoints.inside(a, b, self.points + other.points)

    def __len__(self) -> int:
        return len(self.points)


# smoothing substitution on one segment
# -------------------------------------
def _smooth_map(a: float, b: float, s: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """x(s) = a + (b-a)(3s^2 - 2s^3) and dx/ds; the near end is used to keep x accurate."""
    w = b - a
    x = np.where(s <= 0.5, a + w * s * s * (3 - 2 * s), b - w * (1 - s) ** 2 * (1 + 2 * s))
    return x, 6 * w * s * (1 - s)


class _Integrand:
    """Vectorised integrand in the smoothing variable of each segment."""

    def __init__(self, f: Callable, segments: Sequence[Tuple[float, float]]):
        self.f = f
        self.segments = segments
        self.evaluations = 0

    def __call__(self, seg: int, s: np.ndarray) -> np.ndarray:
        a, b = self.segments[seg]
        x, jac = _smooth_map(a, b, s)
        # nodes that round onto the segment ends carry zero weight in the limit
        inside = (x > a) & (x < b)
        values = np.zeros_like(x)
        if np.any(inside):
            fx = np.asarray(self.f(x[inside]), dtype=float)
            values[inside] = np.broadcast_to(fx, (int(inside.sum()),))
        self.evaluations += int(inside.sum())
        if not np.all(np.isfinite(values)):
            bad = x[inside][~np.isfinite(values[inside])]
            logger.error(f"Integrand is not finite at x = {bad[:5]} on segment [{a}, {b}]")
            raise NonFiniteIntegrand(f"integrand returned non-finite values at x = {bad[:5]}")
        return values * jac


def _gk_panels(integrand: _Integrand, seg: int, bounds: Sequence[Tuple[float, float]]):
    """Kronrod value, |Kronrod - Gauss| and a roundoff-limited flag per (s0, s1) panel, one integrand call."""
    lo = np.array([p[0] for p in bounds])
    hi = np.array([p[1] for p in bounds])
    half = 0.5 * (hi - lo)
    centre = 0.5 * (hi + lo)
    s = (centre[:, None] + half[:, None] * NODES[None, :]).ravel()
    fs = integrand(seg, s).reshape(len(bounds), 15)
    kronrod = half * (fs @ KRONROD_WEIGHTS)
    gauss = half * (fs @ GAUSS_WEIGHTS)
    roundoff = 50 * np.finfo(float).eps * half * (np.abs(fs) @ KRONROD_WEIGHTS)
    difference = np.abs(kronrod - gauss)
    return kronrod, np.maximum(difference, roundoff), difference <= roundoff


def integrate_adaptive(
    f: Callable,
    a: float,
    b: float,
    tol: float = DEFAULT_TOL,
    breakpoints: Optional[Breakpoints] = None,
    max_evaluations: int = MAX_EVALUATIONS,
    vectorized: bool = True,
) -> QuadratureResult:
    """Integrate f over [a, b] to absolute tolerance ``tol``.

    Parameters
    ----------
    f : callable
        Integrand; takes and returns numpy arrays unless ``vectorized`` is False.
        Integrable square-root or logarithmic behaviour is allowed at a, b and at
        the breakpoints, which are never sampled.
    a, b : float
        Finite limits with a < b.
    tol : float
        Requested absolute error.
    breakpoints : Breakpoints, optional
        Interior points where f is singular or non-smooth.
    max_evaluations : int
        Budget of integrand evaluations over all panels.

    Returns
    -------
    QuadratureResult
        ``converged`` is False when the budget ran out first.
    """
    if not a < b:
        raise DomainError(f"integration limits must satisfy a < b, got [{a}, {b}]")
    points = breakpoints.points if breakpoints is not None else ()
    if any(not (a < p < b) for p in points):
        raise DomainError("breakpoints must be interior to the integration interval")

    func = f if vectorized else np.vectorize(f, otypes=[float])
    edges = [a, *points, b]
    segments = list(zip(edges[:-1], edges[1:]))
    integrand = _Integrand(func, segments)

    heap: List[Tuple[float, int, int, float, float, float]] = []
    retired: List[Tuple[int, float, float, float, float]] = []
    counter = 0
    for seg in range(len(segments)):
        values, errors, _ = _gk_panels(integrand, seg, [(0.0, 1.0)])
        heapq.heappush(heap, (-errors[0], counter, seg, 0.0, 1.0, values[0]))
        counter += 1

    total_error = math.fsum(-item[0] for item in heap)
    iterations = 0
    while total_error > tol and heap:
        iterations += 1
        if integrand.evaluations + 30 > max_evaluations:
            break
        neg_err, _, seg, s0, s1, _ = heapq.heappop(heap)
        mid = 0.5 * (s0 + s1)
        values, errors, at_floor = _gk_panels(integrand, seg, [(s0, mid), (mid, s1)])
        total_error += errors[0] + errors[1] + neg_err
        for (lo, hi), value, error, floor in zip(((s0, mid), (mid, s1)), values, errors, at_floor):
            if floor or hi - lo < MIN_PANEL_WIDTH:
                retired.append((seg, lo, hi, value, error))
            else:
                heapq.heappush(heap, (-error, counter, seg, lo, hi, value))
                counter += 1
        if iterations % 1024 == 0:
            # resynchronise the running sum
            total_error = math.fsum(-item[0] for item in heap) + math.fsum(r[4] for r in retired)

    panels = sorted(
        [(seg, lo, hi, value, -neg) for neg, _, seg, lo, hi, value in heap] + retired
    )
    value = math.fsum(p[3] for p in panels)
    error = math.fsum(p[4] for p in panels)
    converged = error <= tol
    if not converged:
        logger.warning(
            f"Quadrature on [{a}, {b}] did not converge: error estimate {error:.3e} > tol {tol:.1e} "
            f"after {integrand.evaluations} evaluations"
        )
    return QuadratureResult(
        value=value,
        error_estimate=error,
        evaluations=max(integrand.evaluations, 1),
        converged=converged,
    )


def integrate_to_minus_infinity(
    f: Callable,
    upper: float,
    tol: float = DEFAULT_TOL,
    max_evaluations: int = MAX_EVALUATIONS,
) -> QuadratureResult:
    """Integrate f over (-inf, upper] through v = upper - (1 - u)/u, u in (0, 1].

    Suited to integrands decaying like |v|^{-3/2}; the mapped integrand then has an
    integrable u^{-1/2} endpoint, handled by the smoothing substitution.
    """

    def mapped(u: np.ndarray) -> np.ndarray:
        return np.asarray(f(upper - (1 - u) / u), dtype=float) / (u * u)

    return integrate_adaptive(mapped, 0.0, 1.0, tol=tol, max_evaluations=max_evaluations)


# breakpoint location
# -------------------
def _bisect(same_as_left: Callable[[float], bool], lo: float, hi: float, width: float = BISECTION_WIDTH) -> float:
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        if mid <= lo or mid >= hi:
            break
        if same_as_left(mid):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def find_sign_changes(f: Callable, a: float, b: float, n_scan: int = DEFAULT_N_SCAN) -> Breakpoints:
    """Roots of f in (a, b) located by an equispaced sign scan and bisection.

    Tangential (even-order) zeros produce no sign change and are not reported.
    """
    if n_scan < 2:
        raise DomainError("n_scan must be at least 2")
    xs = np.linspace(a, b, n_scan + 1)
    signs = np.sign(np.asarray(f(xs), dtype=float))

    def sign_at(t: float) -> float:
        return float(np.sign(np.asarray(f(np.array([t])), dtype=float)[0]))

    roots: List[float] = []
    for i in range(n_scan):
        left, right = signs[i], signs[i + 1]
        if left * right < 0:
            roots.append(_bisect(lambda t, s=left: sign_at(t) == s, xs[i], xs[i + 1]))
        elif right == 0 and i + 2 <= n_scan and left * signs[i + 2] < 0:
            roots.append(float(xs[i + 1]))
    return Breakpoints.inside(a, b, roots)


def find_level_changes(count: Callable, a: float, b: float, n_scan: int = DEFAULT_N_SCAN) -> Breakpoints:
    """Points in (a, b) where an integer-valued function changes value.

    The scan uses cell midpoints, so neither a nor b is ever sampled.
    """
    if n_scan < 2:
        raise DomainError("n_scan must be at least 2")
    h = (b - a) / n_scan
    xs = a + h * (np.arange(n_scan) + 0.5)
    levels = np.asarray(count(xs))

    def level_at(t: float) -> int:
        return int(np.asarray(count(np.array([t])))[0])

    changes = [
        _bisect(lambda t, n=levels[i]: level_at(t) == n, xs[i], xs[i + 1])
        for i in range(n_scan - 1)
        if levels[i] != levels[i + 1]
    ]
    return Breakpoints.inside(a, b, changes)
