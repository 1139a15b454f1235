"""
Special functions behind the derivatives of g(k) = m(P_{2-k}) and g~(k) = m(Q_k).

The generating function f(z) = sum_n CT_n z^n of the constant terms
CT_n = sum_j C(n, j)^2 C(2j, j) satisfies the Picard-Fuchs equation

    z(z-1)(9z-1) f'' + (27z^2 - 20z + 1) f' + 3(3z - 1) f = 0,

and its continuations are 2F1(1/3, 2/3; 1; w) in cubic arguments. Near w = 1 the
hypergeometric function is evaluated through Ramanujan's cubic-to-quadratic
transformation and an arithmetic-geometric mean.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np
import sympy
from loguru import logger
from scipy import optimize, special

from mahlerlab.exceptions import DomainError, NonConvergence
from mahlerlab.quadrature import QuadratureResult, integrate_adaptive, integrate_to_minus_infinity

SERIES_REL_TAIL = 1e-17
SERIES_MAX_TERMS = 100_000
SERIES_RADIUS = 1 / 9
SERIES_MARGIN = 1e-6
DIRECT_2F1_LIMIT = 0.95
AGM_MAX_STEPS = 64
INTEGRAL_TOL = 1e-12


def _converged(result: QuadratureResult, what: str) -> float:
    """The value of a finished integral; an exhausted budget raises NonConvergence."""
    if not result.converged:
        raise NonConvergence(
            f"{what}: quadrature error estimate {result.error_estimate:.2e} after {result.evaluations} evaluations"
        )
    return result.value


# constant terms and the Picard-Fuchs recurrence
# ----------------------------------------------
@dataclass(frozen=True)
class CTSequence:
    """Exact constant terms CT_0, CT_1, ... of powers of the Laurent polynomial."""

    coefficients: Tuple[int, ...]

    def __post_init__(self):
        if not self.coefficients or self.coefficients[0] != 1:
            raise ValueError("CT sequence must start with CT_0 = 1")

    @classmethod
    def build(cls, n_max: int) -> "CTSequence":
        return cls(coefficients=tuple(ct_coeff(n) for n in range(n_max + 1)))

    def __getitem__(self, n: int) -> int:
        return self.coefficients[n]

    def __len__(self) -> int:
        return len(self.coefficients)


_central_binomials: List[int] = [1]
_ct_values: List[int] = [1]


def _central_binomial(j: int) -> int:
    while len(_central_binomials) <= j:
        i = len(_central_binomials) - 1
        _central_binomials.append(_central_binomials[i] * 2 * (2 * i + 1) // (i + 1))
    return _central_binomials[j]


def ct_coeff(n: int) -> int:
    """CT_n = sum_{j=0}^n C(n, j)^2 C(2j, j), exact."""
    if n < 0:
        raise DomainError(f"CT index must be non-negative, got {n}")
    while len(_ct_values) <= n:
        m = len(_ct_values)
        total, binom = 0, 1
        for j in range(m + 1):
            total += binom * binom * _central_binomial(j)
            binom = binom * (m - j) // (j + 1)
        _ct_values.append(total)
    return _ct_values[n]


@dataclass(frozen=True)
class Recurrence:
    """sum_s c_s(n) a_{n+s} = 0 with integer polynomials c_s (highest power first)."""

    shifts: Tuple[int, ...]
    coefficients: Tuple[Tuple[int, ...], ...]

    def polynomial(self, shift: int) -> Tuple[int, ...]:
        return self.coefficients[self.shifts.index(shift)]

    def residual(self, a: Sequence[int], n: int) -> int:
        total = 0
        for shift, poly in zip(self.shifts, self.coefficients):
            index = n + shift
            if index < 0:
                continue
            value = 0
            for c in poly:
                value = value * n + c
            total += value * a[index]
        return total


def derive_recurrence() -> Recurrence:
    """Substitute f = sum a_n z^n into the Picard-Fuchs equation and match powers of z.

    A term c z^m f^{(r)} contributes c * ff(n + r - m, r) * a_{n+r-m} to the
    coefficient of z^n, ff being the falling factorial.
    """
    z, n = sympy.symbols("z n")
    ode = (3 * (3 * z - 1), 27 * z**2 - 20 * z + 1, z * (z - 1) * (9 * z - 1))
    collected: Dict[int, sympy.Expr] = {}
    for order, coefficient in enumerate(ode):
        for (power,), c in sympy.Poly(coefficient, z).terms():
            shift = order - power
            term = c * sympy.expand_func(sympy.ff(n + shift, order))
            collected[shift] = collected.get(shift, 0) + term
    shifts = tuple(sorted(collected))
    polys = tuple(
        tuple(int(c) for c in sympy.Poly(sympy.expand(collected[s]), n).all_coeffs())
        for s in shifts
    )
    logger.debug(f"Picard-Fuchs recurrence: shifts {shifts}, coefficients {polys}")
    return Recurrence(shifts=shifts, coefficients=polys)


def pf_recurrence_check(n_max: int, coefficients: Optional[Sequence[int]] = None) -> bool:
    """True iff the derived recurrence annihilates CT_0..CT_{n_max} in exact arithmetic."""
    if n_max < 2:
        raise DomainError(f"n_max must be at least 2, got {n_max}")
    a = list(coefficients) if coefficients is not None else [ct_coeff(i) for i in range(n_max + 1)]
    recurrence = derive_recurrence()
    top = max(recurrence.shifts)
    return all(recurrence.residual(a, n) == 0 for n in range(0, n_max + 1 - top))


# f(z) and its continuations
# --------------------------
def _ct_terms(z: float) -> Iterator[float]:
    """t_n = CT_n z^n from the float recurrence; CT_n is its dominant solution."""
    previous, current = 0.0, 1.0
    n = 0
    while True:
        yield current
        a = 10 * n * n + 10 * n + 3
        b = 9 * n * n
        previous, current = current, z * (a * current - b * z * previous) / (n + 1) ** 2
        n += 1


def f_series(z: float) -> float:
    """f(z) = sum_n CT_n z^n for |z| < 1/9."""
    if abs(z) >= SERIES_RADIUS - SERIES_MARGIN:
        raise DomainError(f"f_series needs |z| < 1/9, got z = {z}")
    terms: List[float] = []
    partial = 0.0
    for n, term in enumerate(_ct_terms(z)):
        terms.append(term)
        partial += term
        if n >= SERIES_MAX_TERMS:
            logger.warning(f"f_series hit the term cap at z = {z}")
            break
        if n >= 1 and abs(term) < SERIES_REL_TAIL * abs(partial):
            break
    return math.fsum(terms)


def f_continuation_neg(z: float) -> float:
    """1/(1-3z) 2F1(1/3, 2/3; 1; 27z^2(1-z)/(1-3z)^3) for z < 0."""
    if not z < 0:
        raise DomainError(f"f_continuation_neg needs z < 0, got {z}")
    denominator = (1 - 3 * z) ** 3
    w = 27 * z * z * (1 - z) / denominator
    return hyp2f1_13_23(w, one_minus_w=(1 - 9 * z) / denominator) / (1 - 3 * z)


def f_continuation_pos(z: float) -> float:
    """1/(1+3z) 2F1(1/3, 2/3; 1; 27z(1-z)^2/(1+3z)^3) for 0 < z < 1/9."""
    if not 0 < z < SERIES_RADIUS:
        raise DomainError(f"f_continuation_pos needs 0 < z < 1/9, got {z}")
    denominator = (1 + 3 * z) ** 3
    w = 27 * z * (1 - z) ** 2 / denominator
    return hyp2f1_13_23(w, one_minus_w=(1 - 9 * z) ** 2 / denominator) / (1 + 3 * z)


# 2F1 and the AGM
# ---------------
def hyp2f1_series(a: float, b: float, c: float, w: float) -> float:
    """Gauss series summed with compensated accumulation; |w| < 1."""
    if abs(w) >= 1:
        raise DomainError(f"hypergeometric series diverges at w = {w}")
    terms = [1.0]
    term, partial = 1.0, 1.0
    for n in range(SERIES_MAX_TERMS):
        term *= (n + a) * (n + b) / ((n + 1) * (n + c)) * w
        terms.append(term)
        partial += term
        if abs(term) < SERIES_REL_TAIL * abs(partial):
            return math.fsum(terms)
    raise NonConvergence(f"2F1({a}, {b}; {c}; {w}) series did not converge in {SERIES_MAX_TERMS} terms")


def _agm_reciprocal(k_prime: float) -> float:
    """1 / AGM(1, k'), i.e. 2F1(1/2, 1/2; 1; 1 - k'^2)."""
    a, b = 1.0, k_prime
    for _ in range(AGM_MAX_STEPS):
        if abs(a - b) <= 1e-16 * a:
            return 1 / a
        a, b = 0.5 * (a + b), math.sqrt(a * b)
    raise NonConvergence(f"AGM did not converge for k' = {k_prime}")


def ellipK_agm(m: float, one_minus_m: Optional[float] = None) -> float:
    """2F1(1/2, 1/2; 1; m) = (2/pi) K(sqrt m) for 0 <= m < 1."""
    complement = 1 - m if one_minus_m is None else one_minus_m
    if not (0 <= m < 1) or complement <= 0:
        raise DomainError(f"ellipK_agm needs 0 <= m < 1, got {m}")
    return _agm_reciprocal(math.sqrt(complement))


def ramanujan_lhs(p: float) -> float:
    """2F1(1/3, 2/3; 1; 27p^2(1+p)^2 / (4(1+p+p^2)^3))."""
    q = p * (1 + p)
    return hyp2f1_13_23(27 * q * q / (4 * (1 + q) ** 3))


def ramanujan_rhs(p: float) -> float:
    """(1+p+p^2)/sqrt(1+2p) * 2F1(1/2, 1/2; 1; p^3(2+p)/(1+2p))."""
    return _ramanujan_rhs(p, 1 - p)


def _ramanujan_rhs(p: float, one_minus_p: float) -> float:
    m = p**3 * (2 + p) / (1 + 2 * p)
    one_minus_m = one_minus_p * (1 + p) ** 3 / (1 + 2 * p)
    return (1 + p + p * p) / math.sqrt(1 + 2 * p) * ellipK_agm(m, one_minus_m)


def _hyp2f1_13_23_near_one(one_minus_w: float) -> float:
    """Solve 1 - w = (2-q)^2 (4q+1) / (4(1+q)^3) for r = 2 - q, then use the AGM form with q = p(1+p)."""
    target = math.sqrt(one_minus_w)

    def gap(r: float) -> float:
        q = 2 - r
        return r * math.sqrt((4 * q + 1) / (4 * (1 + q) ** 3)) - target

    r = optimize.brentq(gap, 0.0, 2.0, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)
    q = 2 - r
    root = math.sqrt(1 + 4 * q)
    p = (root - 1) / 2
    return _ramanujan_rhs(p, 2 * r / (3 + root))


def hyp2f1_13_23(w: float, one_minus_w: Optional[float] = None) -> float:
    """2F1(1/3, 2/3; 1; w) for real w < 1.

    Direct series for |w| <= 0.95, Ramanujan's transformation for 0.95 < w < 1 and
    Pfaff's transformation below -0.95. Passing ``one_minus_w`` keeps the
    distance to the singularity exact when the caller knows it in closed form.
    """
    complement = 1 - w if one_minus_w is None else one_minus_w
    if w >= 1 or complement <= 0:
        raise DomainError(f"2F1(1/3, 2/3; 1; w) needs w < 1, got {w}")
    if abs(w) <= DIRECT_2F1_LIMIT:
        return hyp2f1_series(1 / 3, 2 / 3, 1, w)
    if w > 0:
        return _hyp2f1_13_23_near_one(complement)
    # Pfaff: (1-w)^{-1/3} 2F1(1/3, 1/3; 1; w/(w-1))
    u = w / (w - 1)
    inner = hyp2f1_series(1 / 3, 1 / 3, 1, u) if u <= DIRECT_2F1_LIMIT else float(special.hyp2f1(1 / 3, 1 / 3, 1, u))
    return complement ** (-1 / 3) * inner


# derivative formulas
# -------------------
class Branch(str, Enum):
    S2_NEG = "S2_neg"
    LEMMA3_MID = "Lemma3_mid"
    S3_LARGE = "S3_large"
    LEMMA2_TILDE = "Lemma2_tilde"


@dataclass(frozen=True)
class DerivativeFormula:
    branch: Branch
    domain: Tuple[Tuple[float, float], ...]  # open intervals

    def contains(self, k: float) -> bool:
        return any(lo < k < hi for lo, hi in self.domain)


DERIVATIVE_FORMULAS = (
    DerivativeFormula(Branch.S2_NEG, ((-math.inf, -1.0),)),
    DerivativeFormula(Branch.LEMMA3_MID, ((0.0, 8.0),)),
    DerivativeFormula(Branch.S3_LARGE, ((8.0, math.inf),)),
    DerivativeFormula(Branch.LEMMA2_TILDE, ((-math.inf, -1.0), (0.0, math.inf))),
)


def branch_for(k: float) -> Branch:
    """The dg/dk branch covering k."""
    for formula in DERIVATIVE_FORMULAS[:3]:
        if formula.contains(k):
            return formula.branch
    raise DomainError(f"dg/dk has no formula at k = {k}")


def p_of_k(k: float) -> float:
    """p in (0, 1) with k = -2/(p(1+p)), for k < -1."""
    if not k < -1:
        raise DomainError(f"p_of_k needs k < -1, got {k}")
    return (math.sqrt(1 - 8 / k) - 1) / 2


def dg_dk_s2(k: float) -> float:
    """F(27k/(k-2)^3)/(k-2) with the complement (k+1)^2(k-8)/(k-2)^3, k < -1."""
    if not k < -1:
        raise DomainError(f"dg_dk_s2 needs k < -1, got {k}")
    cube = (k - 2) ** 3
    return hyp2f1_13_23(27 * k / cube, one_minus_w=(k + 1) ** 2 * (k - 8) / cube) / (k - 2)


def dg_dk_agm(p: float) -> float:
    """Closed form of the t-integral in dg_dk_lemma4: -(p(1+p)/2)/sqrt(1+2p) * 2F1(1/2, 1/2; 1; p^3(2+p)/(1+2p))."""
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    m = p**3 * (2 + p) / (1 + 2 * p)
    one_minus_m = (1 - p) * (1 + p) ** 3 / (1 + 2 * p)
    return -(p * (1 + p) / 2) / math.sqrt(1 + 2 * p) * ellipK_agm(m, one_minus_m)


def dg_dk_lemma4(p: float) -> float:
    """-(1/2pi) int_0^1 p(1+p) dt / sqrt(t(1-t)(1+2p-p^3(2+p)t)) by quadrature, k = -2/(p(1+p))."""
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    c = p**3 * (2 + p)

    def integrand(t: np.ndarray) -> np.ndarray:
        return 1 / np.sqrt(t * (1 - t) * (1 + 2 * p - c * t))

    value = _converged(integrate_adaptive(integrand, 0.0, 1.0, tol=INTEGRAL_TOL), "dg_dk_lemma4")
    return -p * (1 + p) * value / (2 * math.pi)


def dg_dk_pform(p: float) -> float:
    """-(1/pi) int_{-inf}^{-4/p^2} p(p+1) dv / sqrt(-(v+4)(p^2 v+4)((p+1)^2 v+4))."""
    if not 0 < p < 1:
        raise DomainError(f"p must lie in (0, 1), got {p}")
    a, b = p * p, (p + 1) ** 2

    def integrand(v: np.ndarray) -> np.ndarray:
        return 1 / np.sqrt(np.abs((v + 4) * (a * v + 4) * (b * v + 4)))

    value = _converged(integrate_to_minus_infinity(integrand, -4 / a, tol=INTEGRAL_TOL), "dg_dk_pform")
    return -p * (p + 1) * value / math.pi


def dg_dk_lemma3(k: float) -> float:
    """(1/2pi) int_0^1 dt / sqrt(t(1-t)(k^2 t^2 + (4-k)k t + 4)) for 0 < k < 8."""
    if not 0 < k < 8:
        raise DomainError(f"dg_dk_lemma3 needs 0 < k < 8, got {k}")

    def integrand(t: np.ndarray) -> np.ndarray:
        return 1 / np.sqrt(t * (1 - t) * (k * k * t * t + (4 - k) * k * t + 4))

    return _converged(integrate_adaptive(integrand, 0.0, 1.0, tol=INTEGRAL_TOL), "dg_dk_lemma3") / (2 * math.pi)


def s3_formula(k: float) -> float:
    """F(27k^2/(k+4)^3)/(k+4) with the complement (k-8)^2(k+1)/(k+4)^3; defined for k > -1, k != 8."""
    if not k > -1 or k == 8:
        raise DomainError(f"s3_formula argument reaches 1 or beyond at k = {k}")
    cube = (k + 4) ** 3
    return hyp2f1_13_23(27 * k * k / cube, one_minus_w=(k - 8) ** 2 * (k + 1) / cube) / (k + 4)


def dg_dk_s3(k: float) -> float:
    """dg/dk for k > 8 through the cubic 2F1 in 27k^2/(k+4)^3."""
    if not k > 8:
        raise DomainError(f"dg_dk_s3 needs k > 8, got {k}")
    return s3_formula(k)


def dg_dk_series(k: float) -> float:
    """f(1/(k+1))/(k+1), the derivative of the constant-term expansion, |k+1| > 9."""
    u = 1 / (k + 1)
    return f_series(u) * u


def dg_dk(k: float) -> float:
    """dg/dk for g(k) = m(P_{2-k}) on k < -1, 0 < k < 8 and k > 8."""
    match branch_for(k):
        case Branch.S2_NEG:
            return dg_dk_agm(p_of_k(k))
        case Branch.LEMMA3_MID:
            return dg_dk_lemma3(k)
        case Branch.S3_LARGE:
            return dg_dk_s3(k)


def boyd_series(k: float) -> float:
    """g(k) = log|k+1| - sum_{n>=1} CT_n / (n (k+1)^n) for |k+1| > 9."""
    if abs(k + 1) <= 9:
        raise DomainError(f"constant-term expansion needs |k+1| > 9, got k = {k}")
    u = 1 / (k + 1)
    terms: List[float] = []
    partial = 0.0
    for n, t in enumerate(_ct_terms(u)):
        if n == 0:
            continue
        term = t / n
        terms.append(term)
        partial += term
        if abs(term) < SERIES_REL_TAIL * max(abs(partial), 1e-300) or n >= SERIES_MAX_TERMS:
            break
    return math.log(abs(k + 1)) - math.fsum(terms)


# the v-integrals of g~
# ---------------------
def _quadratic_roots(b: float, c: float) -> List[float]:
    """Distinct real roots of v^2 + b v + c, Newton-polished; a double root is dropped."""
    disc = b * b - 4 * c
    if disc <= 0:
        return []
    r1 = (-b - math.copysign(math.sqrt(disc), b)) / 2
    r2 = c / r1
    polished = []
    for r in (r1, r2):
        derivative = 2 * r + b
        if derivative != 0:
            r -= (r * r + b * r + c) / derivative
        polished.append(r)
    return sorted(polished)


def _radicand(k: float):
    """-(v+4)(v^2 + k(k-4)v + 4k^2), factored where the quadratic splits."""
    b, c = k * (k - 4), 4 * k * k
    roots = _quadratic_roots(b, c)
    if roots:
        r1, r2 = roots

        def radicand(v: np.ndarray) -> np.ndarray:
            return -(v + 4) * (v - r1) * (v - r2)

    else:

        def radicand(v: np.ndarray) -> np.ndarray:
            return -(v + 4) * (v * v + b * v + c)

    return radicand, sorted([-4.0, *roots])


def _positive_part_integral(k: float, upper: float) -> float:
    """int over the parts of (-inf, upper] where the radicand is positive of dv / sqrt(radicand)."""
    radicand, roots = _radicand(k)

    def integrand(v: np.ndarray) -> np.ndarray:
        return 1 / np.sqrt(np.abs(radicand(v)))

    # positive on (-inf, roots[0]) and, for three roots, on (roots[1], roots[2])
    total = _converged(integrate_to_minus_infinity(integrand, min(roots[0], upper), tol=INTEGRAL_TOL), f"v-integral at k = {k}")
    if len(roots) == 3 and roots[1] < upper:
        inner = integrate_adaptive(integrand, roots[1], min(roots[2], upper), tol=INTEGRAL_TOL)
        total += _converged(inner, f"v-integral at k = {k}")
    return total


def dgt_dk(k: float) -> float:
    """dg~/dk = sign(k)/pi * Re int_{-inf}^{k(3-k)} dv / sqrt(-(v+4)(v^2 + k(k-4)v + 4k^2))."""
    if -1 <= k <= 0:
        raise DomainError(f"dg~/dk formula needs k < -1 or k > 0, got {k}")
    return math.copysign(1.0, k) / math.pi * _positive_part_integral(k, k * (3 - k))


def dgt_dk_tform(k: float) -> float:
    """sign(k)/pi * Re int_{-1}^{1} dt / sqrt((1-t)(2t^2+kt+k)(2t+k-2))."""
    if -1 <= k <= 0:
        raise DomainError(f"dg~/dk formula needs k < -1 or k > 0, got {k}")

    def radicand(t):
        return (1 - t) * (2 * t * t + k * t + k) * (2 * t + k - 2)

    def integrand(t: np.ndarray) -> np.ndarray:
        return 1 / np.sqrt(np.abs(radicand(t)))

    # 2t^2 + kt + k = 2 (t - t1)(t - t2) when it splits
    candidates = [(2 - k) / 2, *_quadratic_roots(k / 2, k / 2)]
    edges = [-1.0, *sorted(t for t in candidates if -1 < t < 1), 1.0]
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        if hi - lo > 0 and radicand(0.5 * (lo + hi)) > 0:
            total += _converged(integrate_adaptive(integrand, lo, hi, tol=INTEGRAL_TOL), "dgt_dk_tform")
    return math.copysign(1.0, k) / math.pi * total


def dg_dk_I1(k: float, real_part: bool = False) -> float:
    """(1/2pi) int_{-inf}^{-4} dv / sqrt(-(v+4)(v^2 + k(k-4)v + 4k^2)).

    For 0 < k < 8 the radicand is positive on the whole range; ``real_part`` keeps
    only the positive-radicand parts, which extends the integral to k > 8.
    """
    if not (0 < k < 8 or (real_part and k > 8)):
        raise DomainError(f"dg_dk_I1 needs 0 < k < 8 (or k > 8 with real_part), got {k}")
    return _positive_part_integral(k, -4.0) / (2 * math.pi)
