"""
Polynomial families P_k, Q_k (Boyd, Bosman) and the three families P_k, Q_k, R_k
comparing genus-2 and elliptic Mahler measures, together with the auxiliary
functions B_k and Delta_k on the unit circle X = e^{i theta}.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from enum import Enum
from typing import Dict, Mapping, Tuple, Union

import numpy as np
from numpy.typing import ArrayLike

from mahlerlab.exceptions import ConfigurationError, DomainError

Exponent = Tuple[int, int]
Number = Union[int, float]


def _exact(c: Number) -> Number:
    """Keep integer-valued coefficients as machine integers."""
    if isinstance(c, (int, np.integer)):
        return int(c)
    c = float(c)
    return int(c) if c.is_integer() else c


@dataclass(frozen=True)
class BivariatePolynomial:
    """Sparse polynomial sum_{i,j} c_ij x^i y^j with real coefficients.

    ``terms`` is a tuple of ``((i, j), c_ij)`` pairs sorted by exponent; no stored
    coefficient is zero and ``degree_y`` is the largest ``j`` present.
    """

    terms: Tuple[Tuple[Exponent, Number], ...]
    degree_y: int

    def __post_init__(self):
        if not self.terms:
            raise ValueError("the zero polynomial has no Mahler measure")
        for (i, j), c in self.terms:
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent in term x^{i} y^{j}")
            if c == 0:
                raise ValueError(f"zero coefficient stored for x^{i} y^{j}")
        if self.degree_y != max(j for (_, j), _ in self.terms):
            raise ValueError("degree_y does not match the stored terms")

    @classmethod
    def from_terms(cls, terms: Mapping[Exponent, Number]) -> "BivariatePolynomial":
        cleaned = {
            (int(i), int(j)): _exact(c) for (i, j), c in terms.items() if c != 0
        }
        if not cleaned:
            raise ValueError("the zero polynomial has no Mahler measure")
        ordered = tuple(sorted(cleaned.items()))
        return cls(terms=ordered, degree_y=max(j for (_, j) in cleaned))

    # structure
    # ---------
    def as_dict(self) -> Dict[Exponent, Number]:
        return dict(self.terms)

    @property
    def degree_x(self) -> int:
        return max(i for (i, _), _ in self.terms)

    @property
    def has_real_coefficients(self) -> bool:
        return all(np.isreal(c) for _, c in self.terms)

    def coefficient(self, i: int, j: int) -> Number:
        return self.as_dict().get((i, j), 0)

    @cached_property
    def _x_polys(self) -> Tuple[np.ndarray, ...]:
        polys = []
        for j in range(self.degree_y + 1):
            coeffs = np.zeros(self.degree_x + 1)
            for (i, jj), c in self.terms:
                if jj == j:
                    coeffs[self.degree_x - i] = c
            polys.append(np.trim_zeros(coeffs, "f") if np.any(coeffs) else np.zeros(1))
        return tuple(polys)

    def x_polynomial(self, j: int) -> np.ndarray:
        """Coefficients of y^j as a polynomial in x, highest power first (np.polyval order)."""
        return self._x_polys[j]

    def y_coefficients(self, x: ArrayLike) -> np.ndarray:
        """Coefficients C_j(x) of y^j, shape ``x.shape + (degree_y + 1,)``, lowest j first."""
        x = np.asarray(x, dtype=complex)
        return np.stack(
            [np.polyval(self.x_polynomial(j), x) for j in range(self.degree_y + 1)],
            axis=-1,
        )

    def leading_y(self, x: ArrayLike) -> np.ndarray:
        return np.polyval(self.x_polynomial(self.degree_y), np.asarray(x, dtype=complex))

    def __call__(self, x: ArrayLike, y: ArrayLike) -> np.ndarray:
        return evaluate(self, x, y)

    # exact arithmetic on the term tables
    # -----------------------------------
    def _combine(self, other: "BivariatePolynomial", sign: int) -> "BivariatePolynomial":
        out = self.as_dict()
        for e, c in other.terms:
            out[e] = out.get(e, 0) + sign * c
        return BivariatePolynomial.from_terms(out)

    def __add__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        return self._combine(other, +1)

    def __sub__(self, other: "BivariatePolynomial") -> "BivariatePolynomial":
        return self._combine(other, -1)

    def __mul__(self, other: Union["BivariatePolynomial", Number]) -> "BivariatePolynomial":
        if not isinstance(other, BivariatePolynomial):
            return BivariatePolynomial.from_terms({e: c * other for e, c in self.terms})
        out: Dict[Exponent, Number] = {}
        for (i1, j1), c1 in self.terms:
            for (i2, j2), c2 in other.terms:
                e = (i1 + i2, j1 + j2)
                out[e] = out.get(e, 0) + c1 * c2
        return BivariatePolynomial.from_terms(out)

    __rmul__ = __mul__


def evaluate(p: BivariatePolynomial, x: ArrayLike, y: ArrayLike) -> np.ndarray:
    """Evaluate p at (x, y) by Horner's rule in y over the x-coefficient polynomials."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    acc = np.zeros(np.broadcast(x, y).shape, dtype=complex)
    for j in range(p.degree_y, -1, -1):
        acc = acc * y + np.polyval(p.x_polynomial(j), x)
    return acc


def monomial(c: Number, i: int = 0, j: int = 0) -> BivariatePolynomial:
    return BivariatePolynomial.from_terms({(i, j): c})


def _family(base: Mapping[Exponent, int], linear: Mapping[Exponent, int], k: Number) -> BivariatePolynomial:
    """Integer template ``base + k * linear``; exact whenever k is integral."""
    k = _exact(k)
    terms: Dict[Exponent, Number] = dict(base)
    for e, c in linear.items():
        terms[e] = terms.get(e, 0) + k * c
    return BivariatePolynomial.from_terms(terms)


# Boyd's and Bosman's families
# ----------------------------
def boyd_P(k: Number) -> BivariatePolynomial:
    """(x+1)y^2 + (x^2+kx+1)y + (x^2+x)."""
    return _family(
        {(0, 2): 1, (1, 2): 1, (0, 1): 1, (2, 1): 1, (1, 0): 1, (2, 0): 1},
        {(1, 1): 1},
        k,
    )


def boyd_P_factored(k: Number) -> BivariatePolynomial:
    """(x+1)(y+1)(x+y) - (2-k)xy, built by multiplication."""
    x_plus_1 = BivariatePolynomial.from_terms({(1, 0): 1, (0, 0): 1})
    y_plus_1 = BivariatePolynomial.from_terms({(0, 1): 1, (0, 0): 1})
    x_plus_y = BivariatePolynomial.from_terms({(1, 0): 1, (0, 1): 1})
    product = x_plus_1 * y_plus_1 * x_plus_y
    shift = 2 - _exact(k)
    return product - monomial(shift, 1, 1) if shift != 0 else product


def boyd_P_tilde_eval(k: float, x: ArrayLike, y: ArrayLike) -> np.ndarray:
    """Laurent polynomial (x+1/x)(y+1/y)(x/y+y/x) - k."""
    x = np.asarray(x, dtype=complex)
    y = np.asarray(y, dtype=complex)
    return (x + 1 / x) * (y + 1 / y) * (x / y + y / x) - k


def bosman_Q(k: Number) -> BivariatePolynomial:
    """Y^2 + (X^4 + kX^3 + 2kX^2 + kX + 1)Y + X^4."""
    return _family(
        {(0, 2): 1, (4, 1): 1, (0, 1): 1, (4, 0): 1},
        {(3, 1): 1, (2, 1): 2, (1, 1): 1},
        k,
    )


def bosman_Q_tilde(k: Number) -> BivariatePolynomial:
    """X^2 * Q~_k(X, Y): same y-roots and Mahler measure as the Laurent polynomial Q~_k."""
    return _family(
        {(2, 2): 1, (4, 1): 1, (0, 1): 1, (2, 0): 1},
        {(3, 1): 1, (2, 1): 2, (1, 1): 1},
        k,
    )


def eval_bosman_Q_tilde(k: float, X: ArrayLike, Y: ArrayLike) -> np.ndarray:
    """Q~_k(X, Y) = Y^2 + B_k(X) Y + 1 with B_k(X) = (X+1/X)^2 + k(X+1/X) + 2k - 2."""
    X = np.asarray(X, dtype=complex)
    Y = np.asarray(Y, dtype=complex)
    s = X + 1 / X
    return Y * Y + (s * s + k * s + 2 * k - 2) * Y + 1


# the families compared at the end: two genus-2 families against an elliptic one
# --------------------------------------------------------------------------------
def thm3_P(k: Number) -> BivariatePolynomial:
    """(x^2+x+1)y^2 + kx(x+1)y + x(x^2+x+1)."""
    return _family(
        {(2, 2): 1, (1, 2): 1, (0, 2): 1, (3, 0): 1, (2, 0): 1, (1, 0): 1},
        {(2, 1): 1, (1, 1): 1},
        k,
    )


def thm3_Q(k: Number) -> BivariatePolynomial:
    """(x^2+x+1)y^2 + (x^4 + kx^3 + (2k-4)x^2 + kx + 1)y + x^2(x^2+x+1)."""
    return _family(
        {
            (2, 2): 1, (1, 2): 1, (0, 2): 1,
            (4, 1): 1, (2, 1): -4, (0, 1): 1,
            (4, 0): 1, (3, 0): 1, (2, 0): 1,
        },
        {(3, 1): 1, (2, 1): 2, (1, 1): 1},
        k,
    )


def thm3_R(k: Number) -> BivariatePolynomial:
    """y^3 - y + x^3 - x + kxy."""
    return _family({(0, 3): 1, (0, 1): -1, (3, 0): 1, (1, 0): -1}, {(1, 1): 1}, k)


# B_k and Delta_k on the unit circle, X = e^{i theta}
# ---------------------------------------------------
def _circle_sum(theta: ArrayLike) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if np.any(np.abs(theta) > np.pi + 1e-12):
        raise DomainError("theta must lie in [-pi, pi]")
    return 2.0 * np.cos(theta)  # X + 1/X


def B_of(k: float, theta: ArrayLike) -> np.ndarray:
    s = _circle_sum(theta)
    return s * s + k * s + 2 * k - 2


def delta_of(k: float, theta: ArrayLike) -> np.ndarray:
    b = B_of(k, theta)
    return b * b - 4


def delta_factored(k: float, theta: ArrayLike) -> np.ndarray:
    """(s^2 + ks + 2k)(s + 2)(s + k - 2) with s = X + 1/X."""
    s = _circle_sum(theta)
    return (s * s + k * s + 2 * k) * (s + 2) * (s + k - 2)


# family identifiers
# ------------------
class Family(str, Enum):
    BOYD_P = "boydP"
    BOSMAN_Q = "bosmanQ"
    T3_P = "t3P"
    T3_Q = "t3Q"
    T3_R = "t3R"


# parameters where the curve drops genus or becomes reducible
DEGENERATE_PARAMETERS = {
    Family.BOSMAN_Q: (-1.0, 0.0, 4.0, 8.0),
    Family.T3_R: (0.0, 3.0, -3.0),
}


@dataclass(frozen=True)
class FamilyPoint:
    family: Family
    k: float
    degenerate: bool

    @classmethod
    def make(cls, family: Union[Family, str], k: float) -> "FamilyPoint":
        family = Family(family)
        degenerate = float(k) in DEGENERATE_PARAMETERS.get(family, ())
        return cls(family=family, k=float(k), degenerate=degenerate)

    def polynomial(self) -> BivariatePolynomial:
        return family_polynomial(self.family, self.k)


def family_polynomial(family: Union[Family, str], k: Number) -> BivariatePolynomial:
    """Factory method to construct the requested family member."""
    try:
        family = Family(family)
    except ValueError as e:
        raise ConfigurationError(f"Unknown family: {family}") from e
    match family:
        case Family.BOYD_P:
            return boyd_P(k)
        case Family.BOSMAN_Q:
            return bosman_Q(k)
        case Family.T3_P:
            return thm3_P(k)
        case Family.T3_Q:
            return thm3_Q(k)
        case Family.T3_R:
            return thm3_R(k)
