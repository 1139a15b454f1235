"""
L-values on the right-hand side of the Mahler-measure identities.

For an elliptic curve E of conductor N and root number +1, L'(E, 0) is obtained from
L(E, 2) through the functional equation of Lambda(s) = N^{s/2} (2 pi)^{-s} Gamma(s) L(E, s);
L(E, 2) itself comes from the approximate functional equation with incomplete-gamma
weights. For the odd characters chi_{-3}, chi_{-4}, L'(chi, -1) comes from L(chi, 2).
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, fields
from functools import lru_cache
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Tuple, Union

import numpy as np
from loguru import logger
from numpy.typing import ArrayLike
from scipy import special

from mahlerlab import DEFAULT_DATA_PATH
from mahlerlab.exceptions import (
    ConfigurationError,
    DomainError,
    NonConvergence,
    StructuralError,
)
from mahlerlab.utils.io import load_curves

CURVES_FILE = "curves.json"
TAIL_CUTOFF = 40.0
CUTOFF_RANGE = (0.5, 2.0)
CUTOFF_GATE = 1e-8
NAIVE_TERMS = 20_000
EM_TERMS = 20
EM_ORDER = 12


# elliptic curves
# ---------------
@dataclass(frozen=True)
class CurveSpec:
    """Weierstrass model y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6."""

    label: str
    a1: int
    a2: int
    a3: int
    a4: int
    a6: int
    conductor: int
    root_number: int

    def __post_init__(self):
        if self.conductor < 1:
            raise StructuralError(f"{self.label}: conductor must be positive")
        if self.root_number not in (-1, 1):
            raise StructuralError(f"{self.label}: root number must be +1 or -1")
        if self.discriminant == 0:
            raise StructuralError(f"{self.label}: singular Weierstrass model (discriminant 0)")
        stray = [p for p in prime_factors(self.conductor) if self.discriminant % p]
        if stray:
            raise StructuralError(
                f"{self.label}: conductor primes {stray} do not divide the discriminant {self.discriminant}"
            )

    @classmethod
    def from_record(cls, record: Dict) -> "CurveSpec":
        expected = {f.name for f in fields(cls)}
        unknown, missing = set(record) - expected, expected - set(record)
        if unknown or missing:
            raise ConfigurationError(
                f"curve record keys: unknown {sorted(unknown)}, missing {sorted(missing)}"
            )
        for name in expected - {"label"}:
            value = record[name]
            if isinstance(value, bool) or not isinstance(value, int):
                raise ConfigurationError(f"curve field {name} must be an integer, got {value!r}")
        return cls(**record)

    @property
    def b_invariants(self) -> Tuple[int, int, int, int]:
        a1, a2, a3, a4, a6 = self.a1, self.a2, self.a3, self.a4, self.a6
        b2 = a1 * a1 + 4 * a2
        b4 = 2 * a4 + a1 * a3
        b6 = a3 * a3 + 4 * a6
        b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
        return b2, b4, b6, b8

    @property
    def discriminant(self) -> int:
        b2, b4, b6, b8 = self.b_invariants
        return -b2 * b2 * b8 - 8 * b4**3 - 27 * b6 * b6 + 9 * b2 * b4 * b6

    @property
    def bad_primes(self) -> Tuple[int, ...]:
        return tuple(prime_factors(self.conductor))

    def is_bad(self, p: int) -> bool:
        return self.conductor % p == 0


class CurveTable:
    """The curves shipped in curves.json, addressed by label."""

    def __init__(self, curves: List[CurveSpec]):
        self._curves = {c.label: c for c in curves}
        if len(self._curves) != len(curves):
            raise ConfigurationError("duplicate curve labels in curve table")

    @classmethod
    def load(cls, path: Optional[Union[str, Path]] = None, filename: str = CURVES_FILE) -> "CurveTable":
        """Load from ``path``, else $MAHLERLAB_CURVES, else ``filename`` under the data directory."""
        path = path or os.getenv("MAHLERLAB_CURVES") or Path(DEFAULT_DATA_PATH) / filename
        table = cls([CurveSpec.from_record(r) for r in load_curves(path)])
        logger.debug(f"Loaded {len(table)} curves from {path}")
        return table

    def by_label(self, label: str) -> CurveSpec:
        try:
            return self._curves[label]
        except KeyError as e:
            logger.error(f"Unknown curve label: {label}")
            raise ConfigurationError(f"unknown curve label: {label}") from e

    @property
    def labels(self) -> Tuple[str, ...]:
        return tuple(self._curves)

    def __iter__(self) -> Iterator[CurveSpec]:
        return iter(self._curves.values())

    def __len__(self) -> int:
        return len(self._curves)


# primes
# ------
def smallest_prime_factors(n: int) -> np.ndarray:
    spf = np.arange(n + 1)
    for p in range(2, int(math.isqrt(n)) + 1):
        if spf[p] == p:
            block = spf[p * p :: p]
            block[block == np.arange(p * p, n + 1, p)] = p
    return spf


def primes_up_to(n: int) -> np.ndarray:
    if n < 2:
        return np.array([], dtype=int)
    spf = smallest_prime_factors(n)
    candidates = np.arange(2, n + 1)
    return candidates[spf[2:] == candidates]


def prime_factors(n: int) -> List[int]:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


# traces of Frobenius
# -------------------
def _affine_polynomial(curve: CurveSpec, x: np.ndarray, y: np.ndarray, p: int) -> np.ndarray:
    lhs = y * y + curve.a1 * x * y + curve.a3 * y
    rhs = x * x * x + curve.a2 * x * x + curve.a4 * x + curve.a6
    return (lhs - rhs) % p


@lru_cache(maxsize=None)
def ap_good(curve: CurveSpec, p: int) -> int:
    """a_p = p + 1 - #E(F_p) at a prime of good reduction."""
    if curve.is_bad(p):
        raise DomainError(f"{curve.label}: p = {p} divides the conductor")
    if p == 2:
        x, y = np.meshgrid(np.arange(2), np.arange(2))
        affine = int((_affine_polynomial(curve, x, y, 2) == 0).sum())
        return p - affine
    # (2y + a1 x + a3)^2 = (a1 x + a3)^2 + 4 (x^3 + a2 x^2 + a4 x + a6)
    x = np.arange(p, dtype=np.int64)
    b = (curve.a1 * x + curve.a3) % p
    rhs = (((x + curve.a2) * x % p + curve.a4) * x + curve.a6) % p
    square_roots = np.bincount(x * x % p, minlength=p)
    affine = int(square_roots[(b * b + 4 * rhs) % p].sum())
    return p - affine


@lru_cache(maxsize=None)
def ap_bad(curve: CurveSpec, p: int) -> int:
    """a_p = p - #E_ns(F_p) at a prime dividing the conductor."""
    if not curve.is_bad(p):
        raise DomainError(f"{curve.label}: p = {p} does not divide the conductor")
    x, y = np.meshgrid(np.arange(p, dtype=np.int64), np.arange(p, dtype=np.int64))
    on_curve = _affine_polynomial(curve, x, y, p) == 0
    f_x = (curve.a1 * y - 3 * x * x - 2 * curve.a2 * x - curve.a4) % p
    f_y = (2 * y + curve.a1 * x + curve.a3) % p
    nonsingular = on_curve & ~((f_x == 0) & (f_y == 0))
    trace = p - (int(nonsingular.sum()) + 1)
    if trace not in (-1, 0, 1):
        logger.error(f"{curve.label}: a_{p} = {trace} at a bad prime")
        raise StructuralError(f"{curve.label}: bad-prime a_{p} = {trace} is outside {{-1, 0, 1}}")
    return trace


def ap(curve: CurveSpec, p: int) -> int:
    return ap_bad(curve, p) if curve.is_bad(p) else ap_good(curve, p)


def an_coeffs(curve: CurveSpec, n_max: int) -> np.ndarray:
    """Dirichlet coefficients as an array ``a`` with ``a[n] = a_n`` for 1 <= n <= n_max (a[0] = 0)."""
    if n_max < 1:
        raise DomainError(f"n_max must be at least 1, got {n_max}")
    spf = smallest_prime_factors(n_max)
    a = np.zeros(n_max + 1, dtype=np.int64)
    a[1] = 1
    for n in range(2, n_max + 1):
        p = int(spf[n])
        m, power = n, 1
        while m % p == 0:
            m //= p
            power *= p
        if m > 1:
            a[n] = a[power] * a[m]
        elif n == p:
            a[n] = ap(curve, p)
        elif curve.is_bad(p):
            a[n] = a[p] * a[n // p]
        else:
            a[n] = a[p] * a[n // p] - p * a[n // (p * p)]
    return a


# incomplete gamma and the approximate functional equation
# --------------------------------------------------------
def inc_gamma_upper(s: float, x: ArrayLike) -> np.ndarray:
    """Upper incomplete gamma Gamma(s, x) for x > 0."""
    x = np.asarray(x, dtype=float)
    if np.any(x <= 0):
        raise DomainError("upper incomplete gamma needs x > 0")
    if s == 2:
        return (1 + x) * np.exp(-x)
    if s == 0:
        return special.exp1(x)
    if s > 0:
        return special.gammaincc(s, x) * special.gamma(s)
    raise DomainError(f"upper incomplete gamma implemented for s = 0 and s > 0, got {s}")


def _lambda_2(curve: CurveSpec, cutoff: float) -> float:
    """Lambda(2) = sum_n a_n [N/(2 pi n)^2 Gamma(2, 2 pi n A/sqrt N) + eps E1(2 pi n/(A sqrt N))]."""
    n_conductor = curve.conductor
    root = math.sqrt(n_conductor)
    n_max = math.ceil(TAIL_CUTOFF * root / (2 * math.pi * min(cutoff, 1 / cutoff))) + 1
    a = an_coeffs(curve, n_max)[1:].astype(float)
    n = np.arange(1, n_max + 1, dtype=float)
    x = 2 * math.pi * n / root
    weights = n_conductor / (2 * math.pi * n) ** 2 * inc_gamma_upper(2, x * cutoff)
    weights += curve.root_number * inc_gamma_upper(0, x / cutoff)
    return math.fsum(a * weights)


def L_E_2(curve: CurveSpec, cutoff: float = 1.0, check: bool = True) -> float:
    """L(E, 2) = Lambda(2) (2 pi)^2 / N, gated on independence of the cutoff parameter."""
    if not CUTOFF_RANGE[0] <= cutoff <= CUTOFF_RANGE[1]:
        raise DomainError(f"cutoff must lie in {CUTOFF_RANGE}, got {cutoff}")
    value = _lambda_2(curve, cutoff)
    if check:
        companion = 1 / cutoff if cutoff != 1 else 1.25
        spread = abs(value - _lambda_2(curve, companion))
        logger.debug(f"{curve.label}: Lambda(2) cutoff spread {spread:.2e}")
        if spread > CUTOFF_GATE * max(1.0, abs(value)):
            logger.error(f"{curve.label}: Lambda(2) depends on the cutoff (spread {spread:.2e})")
            raise NonConvergence(
                f"{curve.label}: Lambda(2) varies by {spread:.2e} with the cutoff; "
                "check conductor and root number"
            )
    return value * (2 * math.pi) ** 2 / curve.conductor


def Lprime_E_0(curve: CurveSpec, cutoff: float = 1.0) -> float:
    """L'(E, 0) = N L(E, 2) / (4 pi^2), from Lambda(0) = Lambda(2) and Gamma(s) ~ 1/s."""
    if curve.root_number != 1:
        raise DomainError(f"{curve.label}: L(E, 0) has a higher-order zero for root number -1")
    return curve.conductor * L_E_2(curve, cutoff) / (4 * math.pi**2)


def naive_L_E_2(curve: CurveSpec, n_terms: int = NAIVE_TERMS) -> float:
    """Partial Dirichlet sum sum_{n <= n_terms} a_n / n^2."""
    a = an_coeffs(curve, n_terms)[1:].astype(float)
    n = np.arange(1, n_terms + 1, dtype=float)
    return math.fsum(a / (n * n))


def hasse_violations(curve: CurveSpec, p_max: int) -> List[int]:
    """Good primes p <= p_max with |a_p| > 2 sqrt(p)."""
    return [
        int(p)
        for p in primes_up_to(p_max)
        if not curve.is_bad(int(p)) and ap_good(curve, int(p)) ** 2 > 4 * p
    ]


# Dirichlet characters
# --------------------
_CHARACTER_VALUES = {
    -3: (0, 1, -1),
    -4: (0, 1, 0, -1),
}


@dataclass(frozen=True)
class DirichletChar:
    """Kronecker symbol n -> (d/n) for the odd primitive characters of discriminant -3 and -4."""

    discriminant: int
    values: Tuple[int, ...]

    @classmethod
    def from_discriminant(cls, d: int) -> "DirichletChar":
        if d not in _CHARACTER_VALUES:
            raise DomainError(f"character of discriminant {d} is not available (use -3 or -4)")
        return cls(discriminant=d, values=_CHARACTER_VALUES[d])

    @property
    def conductor(self) -> int:
        return abs(self.discriminant)

    def __call__(self, n: ArrayLike) -> Union[int, np.ndarray]:
        table = np.asarray(self.values)
        out = table[np.asarray(n) % self.conductor]
        return int(out) if np.ndim(out) == 0 else out


def dirichlet_L(chi: DirichletChar, s: float) -> float:
    """L(chi, s) = f^{-s} sum_{r=1}^{f} chi(r) zeta(s, r/f) for s > 1."""
    if not s > 1:
        raise DomainError(f"dirichlet_L needs s > 1, got {s}")
    f = chi.conductor
    return f ** (-s) * math.fsum(
        chi(r) * float(special.zeta(s, r / f)) for r in range(1, f + 1)
    )


def Lprime_chi_minus1(chi: DirichletChar) -> float:
    """L'(chi, -1) = f^{3/2}/(4 pi) L(chi, 2) for odd primitive chi of conductor f."""
    return chi.conductor**1.5 / (4 * math.pi) * dirichlet_L(chi, 2)


@lru_cache(maxsize=1)
def _bernoulli_even() -> np.ndarray:
    return special.bernoulli(2 * EM_ORDER)


def hurwitz_zeta(s: float, a: float) -> float:
    """zeta(s, a) by Euler-Maclaurin summation; continues analytically to s < 1."""
    if s == 1:
        raise DomainError("Hurwitz zeta has a pole at s = 1")
    if not 0 < a <= 1:
        raise DomainError(f"Hurwitz zeta shift must lie in (0, 1], got {a}")
    tail_start = EM_TERMS + a
    head = math.fsum((n + a) ** (-s) for n in range(EM_TERMS))
    terms = [head, tail_start ** (1 - s) / (s - 1), 0.5 * tail_start ** (-s)]
    bernoulli = _bernoulli_even()
    rising = s  # s (s+1) ... (s + 2j - 2)
    for j in range(1, EM_ORDER + 1):
        if j > 1:
            rising *= (s + 2 * j - 3) * (s + 2 * j - 2)
        terms.append(bernoulli[2 * j] / math.factorial(2 * j) * rising * tail_start ** (-s - 2 * j + 1))
    return math.fsum(terms)


def dirichlet_L_hurwitz(chi: DirichletChar, s: float) -> float:
    """L(chi, s) = f^{-s} sum_r chi(r) zeta(s, r/f), valid for every s != 1."""
    f = chi.conductor
    return f ** (-s) * math.fsum(chi(r) * hurwitz_zeta(s, r / f) for r in range(1, f + 1) if chi(r))


def lprime_chi_minus1_hurwitz(chi: DirichletChar, h: float = 1e-4) -> float:
    """Central difference of L(chi, s) at s = -1 through the Hurwitz zeta function."""
    return (dirichlet_L_hurwitz(chi, -1 + h) - dirichlet_L_hurwitz(chi, -1 - h)) / (2 * h)
