"""
Scenario runner: computes both sides of every Mahler-measure identity and reports
whether they agree.

Each identity is a ``Claim`` whose ``compute`` is a ``functools.partial`` of a
module-level function, so claims can be shipped to a process pool. Rows come back
in declaration order regardless of completion order.
"""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from fractions import Fraction
from functools import partial
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence

import numpy as np
import pandas as pd
from loguru import logger
from termcolor2 import c as tc
from tqdm import tqdm

from mahlerlab import hyperg, lfunc
from mahlerlab.exceptions import ConfigurationError, DomainError, MahlerlabError, NonConvergence
from mahlerlab.lfunc import CurveSpec, CurveTable, DirichletChar
from mahlerlab.mahler import bosman_gt, boyd_g, mahler_jensen, richardson_derivative
from mahlerlab.polyfam import Family, FamilyPoint, monomial, thm3_P, thm3_Q, thm3_R
from mahlerlab.quadrature import integrate_adaptive

INFO_PREFIX = "info."
MAX_DENOMINATOR = 64
RATIO_RESIDUAL = 1e-6
THM3_BOUNDARY = 16 / (3 * math.sqrt(3))
SUITE_ORDER = ("thm1", "thm2", "bosman", "thm3", "lemma5", "asymp", "series", "lfunc")

DEFAULT_TOLERANCES = {
    "zero": 1e-8,
    "measure_identity": 1e-6,
    "measure_lvalue": 1e-5,
    "derivative": 1e-8,
    "finite_difference": 1e-5,
    "series": 1e-9,
    "substitution": 1e-8,
    "dirichlet_crosscheck": 1e-7,
    "agm": 1e-11,
    "cutoff_spread": 1e-9,
    "naive_partial_sum": 1e-3,
    "obstruction": 1e-3,
}


# rows and claims
# ---------------
@dataclass(frozen=True)
class VerificationRow:
    claim_id: str
    lhs: float
    rhs: float
    tolerance: float
    lhs_error_estimate: float = 0.0
    rhs_error_estimate: float = 0.0
    wall_time_ms: int = 0
    non_converged: bool = False
    note: str = ""

    @property
    def abs_diff(self) -> float:
        return abs(self.lhs - self.rhs)

    @property
    def passed(self) -> bool:
        """abs_diff <= max(tolerance, 3 (lhs_err + rhs_err)); NaN never passes."""
        gate = max(self.tolerance, 3 * (self.lhs_error_estimate + self.rhs_error_estimate))
        return bool(self.abs_diff <= gate)

    @property
    def informational(self) -> bool:
        return self.claim_id.startswith(INFO_PREFIX)

    def as_record(self) -> Dict[str, Any]:
        return {
            "claim_id": self.claim_id,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_diff": self.abs_diff,
            "tolerance": self.tolerance,
            "passed": self.passed,
            "lhs_err": self.lhs_error_estimate,
            "rhs_err": self.rhs_error_estimate,
            "wall_time_ms": self.wall_time_ms,
        }


@dataclass(frozen=True)
class RationalGuess:
    numerator: int
    denominator: int
    residual: float

    @property
    def value(self) -> float:
        return self.numerator / self.denominator


class Sides(NamedTuple):
    """Both sides of a claim with their error estimates; ``tolerance`` overrides the claim's."""

    lhs: float
    rhs: float
    lhs_err: float = 0.0
    rhs_err: float = 0.0
    converged: bool = True
    tolerance: Optional[float] = None
    note: str = ""


@dataclass(frozen=True)
class Claim:
    claim_id: str
    compute: Callable[[], Sides]
    tolerance: float
    note: str = ""


def rational_ratio(x: float, y: float, max_den: int = MAX_DENOMINATOR) -> Optional[RationalGuess]:
    """Best rational approximation of x/y with denominator <= max_den, if within 1e-6."""
    if y == 0:
        raise DomainError("rational_ratio needs y != 0")
    if not 1 <= max_den <= MAX_DENOMINATOR:
        raise DomainError(f"max_den must lie in [1, {MAX_DENOMINATOR}], got {max_den}")
    ratio = x / y
    if not math.isfinite(ratio):
        return None
    guess = Fraction(ratio).limit_denominator(max_den)
    residual = abs(ratio - guess.numerator / guess.denominator)
    if residual > RATIO_RESIDUAL:
        return None
    return RationalGuess(numerator=guess.numerator, denominator=guess.denominator, residual=residual)


def evaluate_claim(claim: Claim, deterministic: bool = False) -> VerificationRow:
    """Compute one claim; failures become failed rows carrying the diagnostic."""
    start = time.perf_counter()
    try:
        sides = claim.compute()
        row = VerificationRow(
            claim_id=claim.claim_id,
            lhs=float(sides.lhs),
            rhs=float(sides.rhs),
            tolerance=claim.tolerance if sides.tolerance is None else sides.tolerance,
            lhs_error_estimate=float(sides.lhs_err),
            rhs_error_estimate=float(sides.rhs_err),
            non_converged=not sides.converged,
            note="; ".join(n for n in (claim.note, sides.note) if n),
        )
    except (MahlerlabError, ArithmeticError, ValueError) as e:
        logger.error(f"Claim {claim.claim_id} failed: {type(e).__name__}: {e}")
        row = VerificationRow(
            claim_id=claim.claim_id,
            lhs=math.nan,
            rhs=math.nan,
            tolerance=claim.tolerance,
            non_converged=isinstance(e, NonConvergence),
            note=f"{type(e).__name__}: {e}",
        )
    elapsed = 0 if deterministic else int(round(1000 * (time.perf_counter() - start)))
    return replace(row, wall_time_ms=elapsed)


def run_claims(
    claims: Sequence[Claim],
    jobs: int = 1,
    deterministic: bool = False,
    progress: bool = True,
) -> List[VerificationRow]:
    """Evaluate claims, in a process pool when jobs > 1; output order is declaration order."""
    worker = partial(evaluate_claim, deterministic=deterministic)
    bar = dict(total=len(claims), ascii=True, desc="Claims verified", disable=not progress)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            return list(tqdm(pool.map(worker, claims), **bar))
    return [worker(claim) for claim in tqdm(claims, **bar)]


def exit_code(rows: Sequence[VerificationRow]) -> int:
    """3 if a counted row failed without converging, 1 if one failed otherwise, else 0."""
    failed = [r for r in rows if not r.informational and not r.passed]
    if any(r.non_converged for r in failed):
        return 3
    return 1 if failed else 0


def rows_to_frame(rows: Sequence[VerificationRow]) -> pd.DataFrame:
    return pd.DataFrame([r.as_record() for r in rows])


# sides of the identities
# -----------------------
def _fmt(k: float) -> str:
    return f"{k:g}"


def _gt_value(k: float, tol: float) -> float:
    return bosman_gt(k, tol).value


def _g_value(k: float, tol: float) -> float:
    return boyd_g(k, tol).value


def zero_side(which: str, tol: float) -> Sides:
    result = bosman_gt(0.0, tol) if which == "Q0" else boyd_g(0.0, tol)
    return Sides(result.value, 0.0, result.error_estimate, 0.0, result.converged)


def measure_ratio_side(k: float, c: float, tol: float) -> Sides:
    """m(Q_k) against c m(P_{2-k})."""
    q, p = bosman_gt(k, tol), boyd_g(k, tol)
    return Sides(q.value, c * p.value, q.error_estimate, abs(c) * p.error_estimate, q.converged and p.converged)


def measure_lvalue_side(k: float, r: int, curve: CurveSpec, tol: float) -> Sides:
    """m(Q_k) against r L'(E, 0)."""
    q = bosman_gt(k, tol)
    return Sides(q.value, r * lfunc.Lprime_E_0(curve), q.error_estimate, 0.0, q.converged)


def boyd_lvalue_side(k: float, c: float, r: int, curve: CurveSpec, tol: float) -> Sides:
    """m(P_{2-k}) against (r/c) L'(E, 0)."""
    g = boyd_g(k, tol)
    return Sides(g.value, r / c * lfunc.Lprime_E_0(curve), g.error_estimate, 0.0, g.converged)


def ratio_side(k: float, r: int, curve: CurveSpec, max_den: int, tol: float) -> Sides:
    """The rational guess for m(Q_k)/L'(E, 0) against the stated multiplier, exact."""
    q = bosman_gt(k, tol)
    guess = rational_ratio(q.value, lfunc.Lprime_E_0(curve), max_den)
    if guess is None:
        return Sides(math.nan, r, note="no rational ratio within the residual gate")
    return Sides(guess.value, r, note=f"{guess.numerator}/{guess.denominator} residual {guess.residual:.2e}")


def dirichlet_side(k: float, discriminant: int, multiplier: int, tol: float) -> Sides:
    q = bosman_gt(k, tol)
    chi = DirichletChar.from_discriminant(discriminant)
    return Sides(q.value, multiplier * lfunc.Lprime_chi_minus1(chi), q.error_estimate, 0.0, q.converged)


def dirichlet_crosscheck_side(discriminant: int) -> Sides:
    chi = DirichletChar.from_discriminant(discriminant)
    return Sides(lfunc.Lprime_chi_minus1(chi), lfunc.lprime_chi_minus1_hurwitz(chi))


def jensen_pair_side(left: Callable, right: Callable, k_left: float, k_right: float, tol: float) -> Sides:
    a, b = mahler_jensen(left(k_left), tol), mahler_jensen(right(k_right), tol)
    return Sides(a.value, b.value, a.error_estimate, b.error_estimate, a.converged and b.converged)


def derivative_side(k: float) -> Sides:
    """dg~/dk against c dg/dk with c = 1 for k < -1 and c = 2 for 0 < k <= 4."""
    c = 1.0 if k < -1 else 2.0
    return Sides(hyperg.dgt_dk(k), c * hyperg.dg_dk(k))


def fd_tilde_side(k: float, h: float, tol: float) -> Sides:
    side = "backward" if k == 4 else "central"
    fd = richardson_derivative(partial(_gt_value, tol=tol), k, h, side=side)
    return Sides(hyperg.dgt_dk(k), fd, note=f"{side} difference")


def fd_side(k: float, h: float, tol: float) -> Sides:
    return Sides(hyperg.dg_dk(k), richardson_derivative(partial(_g_value, tol=tol), k, h))


def obstruction_side(k: float) -> Sides:
    dgt, dg = hyperg.dgt_dk(k), hyperg.dg_dk(k)
    return Sides(dgt, 2 * dg, note=f"mismatch {abs(dgt - 2 * dg):.3e}")


def asymptotic_side(k: float, k_ref: float, which: str, tol: float) -> Sides:
    """|g~(k) - log|k|| or |g~(k) - g(k)| against C/|k|, C fitted at k_ref with 20% slack."""

    def gap(t: float):
        gt = bosman_gt(t, tol)
        if which == "log":
            return abs(gt.value - math.log(abs(t))), gt.error_estimate
        g = boyd_g(t, tol)
        return abs(gt.value - g.value), gt.error_estimate + g.error_estimate

    d, err = gap(k)
    d_ref, _ = gap(k_ref)
    constant = 1.2 * d_ref * abs(k_ref)
    return Sides(d, 0.0, err, 0.0, tolerance=constant / abs(k), note=f"C = {constant:.4g}, |k| d = {d * abs(k):.4g}")


def constant_term_side(k: float, tol: float) -> Sides:
    g = boyd_g(k, tol)
    return Sides(g.value, hyperg.boyd_series(k), g.error_estimate, 0.0, g.converged)


def monomial_side(k: float, tol: float) -> Sides:
    result = mahler_jensen(monomial(k, 1, 1), tol)
    return Sides(result.value, math.log(abs(k)), result.error_estimate, 0.0, result.converged)


def call_side(left: Callable, right: Callable) -> Sides:
    return Sides(left(), right())


def scaled(fn: Callable, factor: float, *args) -> float:
    return factor * fn(*args)


def recurrence_side(n_max: int) -> Sides:
    return Sides(float(hyperg.pf_recurrence_check(n_max)), 1.0)


def ellipk_quadrature(m: float) -> float:
    """(1/pi) int_0^1 dt / sqrt(t(1-t)(1-mt))."""
    result = integrate_adaptive(lambda t: 1 / np.sqrt(t * (1 - t) * (1 - m * t)), 0.0, 1.0, tol=1e-13)
    return result.value / math.pi


def hasse_side(curve: CurveSpec, p_max: int) -> Sides:
    violations = lfunc.hasse_violations(curve, p_max)
    return Sides(len(violations), 0.0, note=f"violations at {violations[:5]}" if violations else "")


def bad_prime_side(curve: CurveSpec) -> Sides:
    values = [lfunc.ap_bad(curve, p) for p in curve.bad_primes]
    return Sides(len(values), len(curve.bad_primes), note=f"a_p at {curve.bad_primes}: {values}")


def multiplicativity_side(curve: CurveSpec, n_pairs: int, seed: int) -> Sides:
    rng = np.random.default_rng(seed)
    bound = 150
    a = lfunc.an_coeffs(curve, bound * bound)
    failures, checked = 0, 0
    while checked < n_pairs:
        m, n = (int(v) for v in rng.integers(2, bound, size=2))
        if math.gcd(m, n) != 1:
            continue
        checked += 1
        failures += int(a[m * n] != a[m] * a[n])
    return Sides(failures, 0.0)


def cm_side(curve: CurveSpec, p_max: int) -> Sides:
    """Good primes p = 2 mod 3 with a_p != 0, for a curve with CM by Z[zeta_3]."""
    nonzero = [
        int(p)
        for p in lfunc.primes_up_to(p_max)
        if p % 3 == 2 and not curve.is_bad(int(p)) and lfunc.ap_good(curve, int(p)) != 0
    ]
    return Sides(len(nonzero), 0.0)


def cutoff_spread_side(curve: CurveSpec, cutoffs: Sequence[float]) -> Sides:
    values = [lfunc.L_E_2(curve, c, check=False) for c in cutoffs]
    return Sides(max(values) - min(values), 0.0, note=f"L(E, 2) = {values[0]:.12f}")


def naive_side(curve: CurveSpec, n_terms: int) -> Sides:
    return Sides(lfunc.L_E_2(curve), lfunc.naive_L_E_2(curve, n_terms))


# suites
# ------
class SuiteBuilder:
    """Turns the ``suites`` section of the configuration into ordered claims."""

    def __init__(self, config: Dict, curves: Optional[CurveTable] = None, tol_override: Optional[float] = None):
        self.config = config
        self.tolerances = {**DEFAULT_TOLERANCES, **(config.get("tolerances") or {})}
        self.suites = config.get("suites") or {}
        quadrature = config.get("quadrature") or {}
        self.quad_tol = float(quadrature.get("tol", 1e-10))
        self.step = float(quadrature.get("richardson_step", 1e-3))
        self.lfunc_config = config.get("lfunc") or {}
        self._curves = curves
        self.tol_override = tol_override

    @property
    def curves(self) -> CurveTable:
        if self._curves is None:
            self._curves = CurveTable.load(filename=self.lfunc_config.get("curves_file", lfunc.CURVES_FILE))
        return self._curves

    def tol(self, key: str) -> float:
        return float(self.tol_override) if self.tol_override is not None else float(self.tolerances[key])

    def params(self, suite: str, key: str, default: Any = None) -> Any:
        value = (self.suites.get(suite) or {}).get(key, default)
        if value is None:
            raise ConfigurationError(f"missing suites.{suite}.{key} in configuration")
        return value

    def build(self, suite: str) -> List[Claim]:
        if suite == "all":
            return [claim for name in SUITE_ORDER for claim in self.build(name)]
        builders = {
            "thm1": self.theorem1,
            "thm2": self.theorem2,
            "bosman": self.bosman,
            "thm3": self.theorem3,
            "lemma5": self.lemma5,
            "asymp": self.asymptotics,
            "series": self.series,
            "lfunc": self.lfunc,
        }
        if suite not in builders:
            raise ConfigurationError(f"Unknown suite: {suite}")
        return builders[suite]()

    @staticmethod
    def _degenerate_note(k: float) -> str:
        return "degenerate parameter" if FamilyPoint.make(Family.BOSMAN_Q, k).degenerate else ""

    def theorem1(self, k_pos: Optional[Sequence[float]] = None, k_neg: Optional[Sequence[float]] = None) -> List[Claim]:
        k_pos = k_pos if k_pos is not None else self.params("thm1", "k_pos")
        k_neg = k_neg if k_neg is not None else self.params("thm1", "k_neg")
        if not k_pos or not k_neg:
            raise ConfigurationError("thm1 parameter lists must be non-empty")
        if any(not 0 <= k <= 4 for k in k_pos) or any(k > -1 for k in k_neg):
            raise ConfigurationError("thm1 needs k_pos in [0, 4] and k_neg <= -1")
        claims = [
            Claim("thm1.zero.Q0", partial(zero_side, "Q0", self.quad_tol), self.tol("zero")),
            Claim("thm1.zero.P2", partial(zero_side, "P2", self.quad_tol), self.tol("zero")),
        ]
        for k, c in [(k, 2.0) for k in k_pos] + [(k, 1.0) for k in k_neg]:
            claims.append(
                Claim(
                    f"thm1.k={_fmt(k)}",
                    partial(measure_ratio_side, float(k), c, self.quad_tol),
                    self.tol("measure_identity"),
                    self._degenerate_note(k),
                )
            )
        return claims

    def theorem2(self) -> List[Claim]:
        max_den = int(self.params("thm2", "max_denominator", MAX_DENOMINATOR))
        claims = []
        for identity in self.params("thm2", "identities"):
            k, c, r = float(identity["k"]), float(identity["c"]), int(identity["r"])
            curve = self.curves.by_label(identity["curve"])
            tag = f"thm2.k={_fmt(k)}"
            claims += [
                Claim(f"{tag}.QP", partial(measure_ratio_side, k, c, self.quad_tol), self.tol("measure_identity")),
                Claim(f"{tag}.QL", partial(measure_lvalue_side, k, r, curve, self.quad_tol), self.tol("measure_lvalue"), curve.label),
                Claim(f"{tag}.PL", partial(boyd_lvalue_side, k, c, r, curve, self.quad_tol), self.tol("measure_lvalue"), curve.label),
                Claim(f"{tag}.ratio", partial(ratio_side, k, r, curve, max_den, self.quad_tol), 0.0, curve.label),
            ]
        return claims

    def bosman(self) -> List[Claim]:
        return [
            Claim("bosman.Q-1", partial(dirichlet_side, -1.0, -3, 2, self.quad_tol), self.tol("measure_identity")),
            Claim("bosman.Q8", partial(dirichlet_side, 8.0, -4, 4, self.quad_tol), self.tol("measure_identity")),
            Claim("bosman.chi-3.hurwitz", partial(dirichlet_crosscheck_side, -3), self.tol("dirichlet_crosscheck")),
            Claim("bosman.chi-4.hurwitz", partial(dirichlet_crosscheck_side, -4), self.tol("dirichlet_crosscheck")),
        ]

    def theorem3(self) -> List[Claim]:
        tol = self.tol("measure_identity")
        claims = []
        for k in self.params("thm3", "pr_k"):
            claims.append(Claim(f"thm3.PR.k={_fmt(k)}", partial(jensen_pair_side, thm3_P, thm3_R, float(k), float(k), self.quad_tol), tol))
        for k in (THM3_BOUNDARY, -THM3_BOUNDARY):
            label = "+" if k > 0 else "-"
            claims.append(Claim(f"thm3.PR.boundary{label}", partial(jensen_pair_side, thm3_P, thm3_R, k, k, self.quad_tol), tol, "|k| = 16/(3 sqrt 3)"))
        for k in self.params("thm3", "qr_k"):
            claims.append(Claim(f"thm3.QR.k={_fmt(k)}", partial(jensen_pair_side, thm3_Q, thm3_R, float(k) + 2, float(k), self.quad_tol), tol))
        for k in self.params("thm3", "excluded_k"):
            claims.append(Claim(f"{INFO_PREFIX}thm3.PR.k={_fmt(k)}", partial(jensen_pair_side, thm3_P, thm3_R, float(k), float(k), self.quad_tol), tol, "inside the excluded band"))
        return claims

    def lemma5(self) -> List[Claim]:
        ks = list(self.params("lemma5", "k_neg")) + list(self.params("lemma5", "k_pos"))
        fd_tol = self.quad_tol / 10
        claims = []
        for k in ks:
            k = float(k)
            claims += [
                Claim(f"lemma5.k={_fmt(k)}", partial(derivative_side, k), self.tol("derivative")),
                Claim(f"lemma5.fd_tilde.k={_fmt(k)}", partial(fd_tilde_side, k, self.step, fd_tol), self.tol("finite_difference")),
                Claim(f"lemma5.fd.k={_fmt(k)}", partial(fd_side, k, self.step, fd_tol), self.tol("finite_difference")),
            ]
        for k in self.params("lemma5", "obstruction_k"):
            claims.append(Claim(f"{INFO_PREFIX}lemma5.obstruction.k={_fmt(k)}", partial(obstruction_side, float(k)), self.tol("derivative"), "expected mismatch"))
        return claims

    def asymptotics(self) -> List[Claim]:
        ks = [float(k) for k in self.params("asymp", "k")]
        k_ref = ks[0]
        claims = []
        for k in ks:
            claims += [
                Claim(f"asymp.log.k={_fmt(k)}", partial(asymptotic_side, k, k_ref, "log", self.quad_tol), 0.0),
                Claim(f"asymp.gap.k={_fmt(k)}", partial(asymptotic_side, k, k_ref, "gap", self.quad_tol), 0.0),
                Claim(f"asymp.series.k={_fmt(k)}", partial(constant_term_side, k, self.quad_tol), self.tol("measure_identity")),
            ]
        claims.append(Claim(f"asymp.monomial.k={_fmt(ks[-1])}", partial(monomial_side, ks[-1], self.quad_tol), self.tol("zero")))
        return claims

    def series(self) -> List[Claim]:
        p = partial(self.params, "series")
        sub, ser = self.tol("substitution"), self.tol("series")
        claims = [Claim(f"series.pf.n_max={p('n_max')}", partial(recurrence_side, int(p("n_max"))), 0.0)]
        for z in p("z_pos"):
            claims.append(Claim(f"series.overlap.z={_fmt(z)}", partial(call_side, partial(hyperg.f_series, z), partial(hyperg.f_continuation_pos, z)), ser))
        for z in p("z_neg"):
            claims.append(Claim(f"series.overlap.z={_fmt(z)}", partial(call_side, partial(hyperg.f_series, z), partial(hyperg.f_continuation_neg, z)), ser))
        for k in p("tform_k"):
            claims.append(Claim(f"series.tform.k={_fmt(k)}", partial(call_side, partial(hyperg.dgt_dk_tform, k), partial(hyperg.dgt_dk, k)), sub))
        for k in p("i1_k"):
            claims.append(Claim(f"series.i1.k={_fmt(k)}", partial(call_side, partial(hyperg.dg_dk_I1, k), partial(hyperg.dg_dk_lemma3, k)), sub))
            if k <= 4:
                claims.append(Claim(f"series.i1_tilde.k={_fmt(k)}", partial(call_side, partial(hyperg.dgt_dk, k), partial(scaled, hyperg.dg_dk_I1, 2.0, k)), sub))
        for q in p("pform_p"):
            k = -2 / (q * (1 + q))
            claims += [
                Claim(f"series.pform.p={_fmt(q)}", partial(call_side, partial(hyperg.dg_dk_pform, q), partial(hyperg.dg_dk_lemma4, q)), sub),
                Claim(f"series.lemma4_agm.p={_fmt(q)}", partial(call_side, partial(hyperg.dg_dk_lemma4, q), partial(hyperg.dg_dk_agm, q)), sub),
                Claim(f"series.s2.p={_fmt(q)}", partial(call_side, partial(hyperg.dg_dk_s2, k), partial(hyperg.dg_dk_agm, q)), sub),
            ]
        claims.append(Claim("series.ramanujan.p=0.5", partial(call_side, partial(hyperg.ramanujan_lhs, 0.5), partial(hyperg.ramanujan_rhs, 0.5)), ser))
        for m in p("agm_m"):
            claims.append(Claim(f"series.agm.m={_fmt(m)}", partial(call_side, partial(hyperg.ellipK_agm, m), partial(ellipk_quadrature, m)), self.tol("agm")))
        for k in p("s3_overlap_k"):
            claims.append(Claim(f"{INFO_PREFIX}series.s3_mid.k={_fmt(k)}", partial(call_side, partial(hyperg.s3_formula, k), partial(hyperg.dg_dk_lemma3, k)), sub))
        for k in p("large_k"):
            claims.append(Claim(f"series.large.k={_fmt(k)}", partial(call_side, partial(hyperg.dg_dk_s3, k), partial(hyperg.dg_dk_series, k)), sub))
            claims.append(Claim(f"{INFO_PREFIX}series.i1_real.k={_fmt(k)}", partial(call_side, partial(hyperg.dg_dk_I1, k, True), partial(hyperg.dg_dk_s3, k)), sub))
        return claims

    def lfunc(self) -> List[Claim]:
        cfg = self.lfunc_config
        p_max = int(cfg.get("hasse_p_max", 2000))
        cutoffs = [float(c) for c in cfg.get("cutoffs", [0.7, 1.0, 1.4])]
        n_terms = int(cfg.get("naive_terms", lfunc.NAIVE_TERMS))
        n_pairs = int(cfg.get("multiplicativity_pairs", 200))
        seed = int(cfg.get("seed", 0))
        claims = []
        for curve in self.curves:
            tag = f"lfunc.{curve.label}"
            claims += [
                Claim(f"{tag}.hasse", partial(hasse_side, curve, p_max), 0.0),
                Claim(f"{tag}.bad_primes", partial(bad_prime_side, curve), 0.0),
                Claim(f"{tag}.multiplicative", partial(multiplicativity_side, curve, n_pairs, seed), 0.0),
                Claim(f"{tag}.cutoff", partial(cutoff_spread_side, curve, cutoffs), self.tol("cutoff_spread")),
                Claim(f"{tag}.naive", partial(naive_side, curve, n_terms), self.tol("naive_partial_sum")),
            ]
            if (curve.a1, curve.a2, curve.a3, curve.a4) == (0, 0, 0, 0):
                claims.append(Claim(f"{tag}.cm", partial(cm_side, curve, p_max), 0.0))
        return claims


# public entry points per suite
# -----------------------------
def run_theorem1(k_list_pos: Sequence[float], k_list_neg: Sequence[float], tol: Optional[float] = None, config: Optional[Dict] = None, jobs: int = 1) -> List[VerificationRow]:
    return run_claims(SuiteBuilder(config or {}, tol_override=tol).theorem1(k_list_pos, k_list_neg), jobs, progress=False)


def run_suite(suite: str, config: Dict, tol: Optional[float] = None, jobs: int = 1, deterministic: bool = False, curves: Optional[CurveTable] = None, progress: bool = True) -> List[VerificationRow]:
    claims = SuiteBuilder(config, curves=curves, tol_override=tol).build(suite)
    logger.info(f"Running suite {suite}: {len(claims)} claims on {jobs} worker(s)")
    return run_claims(claims, jobs=jobs, deterministic=deterministic, progress=progress)


def run_theorem2(config: Dict, tol: Optional[float] = None, **kwargs) -> List[VerificationRow]:
    return run_suite("thm2", config, tol, **kwargs)


def run_bosman(config: Dict, tol: Optional[float] = None, **kwargs) -> List[VerificationRow]:
    return run_suite("bosman", config, tol, **kwargs)


def run_theorem3(config: Dict, tol: Optional[float] = None, **kwargs) -> List[VerificationRow]:
    return run_suite("thm3", config, tol, **kwargs)


def run_lemma5(config: Dict, tol: Optional[float] = None, **kwargs) -> List[VerificationRow]:
    return run_suite("lemma5", config, tol, **kwargs)


def run_asymptotics(config: Dict, **kwargs) -> List[VerificationRow]:
    return run_suite("asymp", config, **kwargs)


# console report
# --------------
def generate_report(suite: str, rows: Sequence[VerificationRow], tol: Optional[float], jobs: int) -> str:
    """Boxed run summary, logged and printed."""
    counted = [r for r in rows if not r.informational]
    failed = [r for r in counted if not r.passed]
    report = f"""
    ============ Verification Report ============
    Suite: {suite}
    Tolerance override: {tol if tol is not None else "per claim class"}
    Workers: {jobs}
    ---------------------------------------------
    Rows: {len(rows)} ({len(rows) - len(counted)} informational)
    Passed: {len(counted) - len(failed)}
    Failed: {len(failed)} ({sum(r.non_converged for r in failed)} non-converged)
    =============================================
    """
    logger.info(report)
    print(report)
    return report


def print_rows(rows: Sequence[VerificationRow]) -> None:
    for row in rows:
        line = f"{row.claim_id:<32} lhs={row.lhs: .12g}  rhs={row.rhs: .12g}  |diff|={row.abs_diff:.2e}"
        if row.informational:
            print(tc(f"[INFO] {line}").yellow)
        elif row.passed:
            print(tc(f"[PASS] {line}").green)
        else:
            print(tc(f"[FAIL] {line}  {row.note}").red)
