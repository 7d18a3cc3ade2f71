"""Named verification checks, each pairing two independent computation routes.

Every check is an IdentityCheck with a left plan and a right plan that
compute the same quantity through genuinely different machinery (exact
telescoping vs. closed form, quadrature vs. L-value, lattice QMC vs.
hypergeometric series).  run_check executes both plans and scores the
deviation against a tolerance determined by the check's kind:

    exact           tolerance 0, values are Rationals or integers
    high-precision  max(10^-(0.3 E - 10), per-check floor), E the effective
                    precision in bits
    statistical     max(5e-3, 6 sigma) with sigma the QMC shift dispersion

Effective precision E is min(requested, per-check cap).  The caps exist
because each accelerated series and each completed-L quadrature has a
measured convergence plateau; past it a tighter tolerance could not be
honored, so both the internal effort and the tolerance freeze together.
That makes "raising precision never flips pass to fail" true by
construction above the cap and by measured margin (>= 10^4) below it.

Checks whose natural statement is "residual vanishes" (certificate suites,
coefficient identities, truncation-bound checks) report the largest
absolute residual as lhs and zero as rhs.  Multi-part checks report the
lhs/rhs pair of the worst part, ties resolved to the last part.
"""

from __future__ import annotations

import difflib
import math
import time
import zlib
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple, Union

from mpmath import mp

from .ffield import greene_nfn, verify_4_1
from .mahler import (
    builtin_descriptor,
    density_integral_check,
    fourier_check,
    m_rk_hypergeometric,
    mahler_numeric,
    r_alpha,
    wan_moment_check,
)
from .modular import (
    NEWFORM_F,
    NEWFORM_H,
    fricke_check,
    l_prime_at_0,
    l_value,
    newform_coefficient,
    theta_psi,
)
from .precision import NoConvergence, ResourceLimitError, accelerate
from .quadrature import IntegrandError, tanh_sinh
from .special import PFQSpec, catalan, ell_k, ell_kprime, pfq, zeta_int
from .wz import (
    PAIR_ONE,
    PAIR_TWO,
    identity_2_8_2_9,
    ramanujan_partial_sums,
    telescope_reconstruct,
    wz_pair_verify,
)

__all__ = [
    "IdentityCheck",
    "CheckResult",
    "RunContext",
    "UnknownCheckError",
    "KINDS",
    "DEFAULT_PRECISION",
    "DEFAULT_SEED",
    "DEFAULT_SAMPLES",
    "DEFAULT_SHIFTS",
    "check_ids",
    "get_check",
    "run_check",
    "run_all",
    "summarize",
]

KINDS = ("exact", "high-precision", "statistical")

DEFAULT_PRECISION = 128
DEFAULT_SEED = 0x5EED
DEFAULT_SAMPLES = 1 << 20
DEFAULT_SHIFTS = 16

# Convergence plateaus, measured: the accelerated binomial series reach
# ~1e-42 at 160 bits effective (352 terms) while the tolerance there is
# 1e-38; the Lambda-symmetry quadratures reach ~1e-45 at 128 bits against
# a 2^-108 threshold.  Raising the caps requires re-measuring the margins.
_CAP_HIGH_PRECISION = 160
_CAP_LAMBDA = 128
_CAP_STATISTICAL = 128

_WZ_RANGE = 500
_FF_PRIMES = (3, 5, 7, 11, 13)
_QEXP_ORDER = 200
_FOURIER_TERMS = 400

Value = Union[Fraction, int, mp.mpf]


class UnknownCheckError(KeyError):
    """Raised for an id not in the registry; carries near-miss suggestions."""

    def __init__(self, check_id: str, suggestions: Sequence[str]):
        self.check_id = check_id
        self.suggestions = tuple(suggestions)
        hint = f"; did you mean: {', '.join(suggestions)}" if suggestions else ""
        super().__init__(f"unknown check id {check_id!r}{hint}")

    def __str__(self) -> str:
        return self.args[0]


@dataclass(frozen=True)
class RunContext:
    """Execution parameters seen by a plan.

    effective is the precision actually used (requested clamped to the
    check's cap); plans must derive every internal target from it so that
    tolerance and effort move together.
    """

    check_id: str
    precision: int
    effective: int
    seed: int
    samples: int
    shifts: int

    def rng_seed(self) -> List[int]:
        """Per-check QMC seed: the run seed joined with a stable hash of the
        check id, so sibling checks never share a lattice shift stream."""
        return [self.seed, zlib.crc32(self.check_id.encode("ascii"))]


@dataclass(frozen=True)
class PlanResult:
    """One side of a check: parallel value tuple plus work accounting."""

    values: Tuple[Value, ...]
    evaluations: int = 0
    error_estimate: Optional[mp.mpf] = None


Plan = Callable[[RunContext], PlanResult]


@dataclass(frozen=True)
class IdentityCheck:
    """A named identity with two computation plans.

    tolerance is the floor for the high-precision formula (exactly zero for
    exact checks); tolerance_at gives the effective tolerance.  The fricke
    rule replaces the decimal formula with the 2^(20-E) threshold used by
    the functional-equation validator itself.
    """

    id: str
    kind: str
    description: str
    lhs_plan: Plan
    rhs_plan: Plan
    tolerance: Union[Fraction, mp.mpf]
    precision_cap: int = _CAP_HIGH_PRECISION
    tolerance_rule: str = "default"

    def effective_precision(self, precision: int) -> int:
        return min(precision, self.precision_cap)

    def tolerance_at(self, precision: int, error_estimate=None):
        e = self.effective_precision(precision)
        if self.kind == "exact":
            return Fraction(0)
        if self.kind == "statistical":
            with mp.workprec(64):
                floor = mp.mpf("5e-3")
                if error_estimate is None:
                    return floor
                return max(floor, 6 * mp.mpf(error_estimate))
        with mp.workprec(64):
            if self.tolerance_rule == "fricke":
                return mp.mpf(2) ** (20 - e)
            formula = mp.mpf(10) ** (-(mp.mpf("0.3") * e - 10))
            return max(formula, mp.mpf(self.tolerance))


@dataclass(frozen=True)
class CheckResult:
    """Outcome of one check run.

    lhs/rhs are None only when a plan failed before producing values; the
    note then carries the failure.  passed is deviation <= tolerance
    (exact kind: deviation == 0).
    """

    id: str
    kind: str
    lhs: Optional[Value]
    rhs: Optional[Value]
    deviation: Optional[Value]
    tolerance: Value
    passed: bool
    wall_ms: int
    evaluations: int
    seed_used: int
    note: str = ""


# ---------------------------------------------------------------------------
# Shared cached quantities


@lru_cache(maxsize=None)
def _l_f4(work: int):
    return l_value(NEWFORM_F, 4, precision=work)


@lru_cache(maxsize=None)
def _zeta3(work: int):
    return zeta_int(3, work)


def _theorem_value(work: int):
    """(192/pi^4) L(f,4) + 7 zeta(3)/pi^2, the L-route for m(R_16)."""
    with mp.workprec(work):
        return 192 / mp.pi ** 4 * _l_f4(work) + 7 * _zeta3(work) / mp.pi ** 2


def _to_mpf(x) -> mp.mpf:
    if isinstance(x, Fraction):
        return mp.mpf(x.numerator) / mp.mpf(x.denominator)
    return mp.mpf(x)


def _hp_tolerance(e: int):
    with mp.workprec(64):
        return mp.mpf(10) ** (-(mp.mpf("0.3") * e - 10))


# ---------------------------------------------------------------------------
# Series plans (exact Fraction partial sums, Levin-accelerated)


def _series_terms(e: int) -> int:
    return max(240, int(2.2 * e))


def _quartic_series(coef: Callable[[int], Fraction], e: int, start: int = 0):
    """Accelerated sum of coef(n) * C(2n,n)^4 / 2^(8n) from exact partials."""
    n_terms = _series_terms(e)
    work = e + 64
    central = 1
    acc = Fraction(0)
    partials: List[Fraction] = []
    for n in range(n_terms):
        if n > 0:
            central = central * 2 * (2 * n - 1) // n
        if n >= start:
            acc += coef(n) * Fraction(central ** 4, 1 << (8 * n))
            partials.append(acc)
    with mp.workprec(work):
        sums = [_to_mpf(p) for p in partials]
        result = accelerate(sums, "levin-u", precision=work)
    if result.low_confidence:
        raise NoConvergence(
            "series acceleration lost confidence; value "
            f"{mp.nstr(result.value, 20)} +- {mp.nstr(result.error_estimate, 3)}"
        )
    return result.value, len(partials)


def _swapped_double_sum(e: int):
    """2 sum_n S_n/(2n+1)^2 with S_n the exact partial sums of
    sum (4k+1) 2^(-8k) C(2k,k)^4 = 8/pi^2 (so S_n -> (4/pi^2) log n
    divergence never enters: summation by parts turns the double sum into
    2 sum_j t_j (pi^2/8 - sum_{n<j} (2n+1)^-2) with t_j = S_j - S_{j-1},
    a pure power tail the accelerator handles).

    The rearrangement is legitimate: every t_j is positive and the inner
    tail factors are bounded, so absolute convergence carries over.
    """
    n_terms = _series_terms(e)
    work = e + 64
    s = ramanujan_partial_sums(n_terms)
    with mp.workprec(work):
        pi2_8 = mp.pi ** 2 / 8
        acc = mp.mpf(0)
        inner = mp.mpf(0)
        partials: List[mp.mpf] = []
        for j in range(n_terms):
            t_j = s[j] - (s[j - 1] if j else Fraction(0))
            acc += 2 * _to_mpf(t_j) * (pi2_8 - inner)
            partials.append(acc)
            inner += mp.mpf(1) / (2 * j + 1) ** 2
        result = accelerate(partials, "levin-u", precision=work)
    if result.low_confidence:
        raise NoConvergence("double-sum acceleration lost confidence")
    return result.value, n_terms


def _plan_theorem_series(ctx: RunContext) -> PlanResult:
    e = ctx.effective
    with mp.workprec(e + 64):
        tail, n = _quartic_series(lambda k: Fraction(1, 2 * k), e, start=1)
        value = 4 * mp.log(2) - tail
    return PlanResult((value,), n)


def _plan_theorem_lvalue(ctx: RunContext) -> PlanResult:
    return PlanResult((_theorem_value(ctx.effective + 32),), 0)


def _plan_6f5_series(ctx: RunContext) -> PlanResult:
    e = ctx.effective
    spec = PFQSpec(
        upper=(Fraction(3, 2),) * 4 + (Fraction(1), Fraction(1)),
        lower=(Fraction(2),) * 5,
        argument=Fraction(1),
    )
    with mp.workprec(e + 48):
        value = pfq(spec, target_abs_error=_hp_tolerance(e) / 8, precision=e + 48)
    return PlanResult((value,), 0)


def _plan_6f5_closed(ctx: RunContext) -> PlanResult:
    work = ctx.effective + 32
    with mp.workprec(work):
        value = (
            128 * mp.log(2)
            - 6144 * _l_f4(work) / mp.pi ** 4
            - 224 * _zeta3(work) / mp.pi ** 2
        )
    return PlanResult((value,), 0)


def _plan_eq_2_11_series(ctx: RunContext) -> PlanResult:
    e = ctx.effective
    with mp.workprec(e + 64):
        series, n = _quartic_series(lambda k: Fraction(1, 2 * k + 1), e)
        value = 14 * _zeta3(e + 64) / mp.pi ** 2 + series
    return PlanResult((value,), n)


def _plan_swap_sum(ctx: RunContext) -> PlanResult:
    value, n = _swapped_double_sum(ctx.effective)
    return PlanResult((value,), n)


def _plan_eq_3_2_closed(ctx: RunContext) -> PlanResult:
    work = ctx.effective + 32
    with mp.workprec(work):
        value = -14 * _zeta3(work) / mp.pi ** 2 + 4 * mp.log(2)
    return PlanResult((value,), 0)


def _plan_eq_3_2_series(ctx: RunContext) -> PlanResult:
    e = ctx.effective
    with mp.workprec(e + 64):
        series, n = _quartic_series(
            lambda k: Fraction(4 * k + 1, 2 * k * (2 * k + 1)), e, start=1
        )
        value = 1 + series
    return PlanResult((value,), n)


def _plan_eq_4_3_closed(ctx: RunContext) -> PlanResult:
    work = ctx.effective + 32
    with mp.workprec(work):
        value = 192 / mp.pi ** 4 * _l_f4(work) - 7 * _zeta3(work) / mp.pi ** 2
    return PlanResult((value,), 0)


def _plan_eq_4_3_series(ctx: RunContext) -> PlanResult:
    value, n = _quartic_series(lambda k: Fraction(1, 2 * k + 1), ctx.effective)
    return PlanResult((value,), n)


# ---------------------------------------------------------------------------
# Quadrature plans: elliptic-integral moments on (0, 1)


def _quad_plan(integrand_factory, prefactor=None) -> Plan:
    def plan(ctx: RunContext) -> PlanResult:
        e = ctx.effective
        work = e + 32
        with mp.workprec(work):
            f = integrand_factory()
            result = tanh_sinh(f, tolerance=_hp_tolerance(e) / 4, precision=work)
            value = result.value
            if prefactor is not None:
                value = prefactor() * value
        return PlanResult((value,), result.evaluations)

    return plan


def _kk_log_k_full():
    def f(k):
        return (1 + k * k) / (1 - k * k) * ell_k(k) * ell_kprime(k) * mp.log(k)

    return f


def _kk_log_k_odd():
    def f(k):
        return 2 * k / (1 - k * k) * ell_k(k) * ell_kprime(k) * mp.log(k)

    return f


def _kk_wan():
    def f(k):
        return -mp.log((1 - k) * (1 + k)) / k * ell_k(k) * ell_kprime(k)

    return f


def _kk_atanh():
    def f(k):
        return ell_k(k) * ell_kprime(k) * mp.log((1 + k) / (1 - k)) / k

    return f


def _kk_log1p():
    def f(k):
        return ell_k(k) * ell_kprime(k) * mp.log(1 + k) / k

    return f


def _kk_log1m():
    def f(k):
        return ell_k(k) * ell_kprime(k) * mp.log(1 - k) / k

    return f


def _const_plan(maker) -> Plan:
    def plan(ctx: RunContext) -> PlanResult:
        work = ctx.effective + 32
        with mp.workprec(work):
            value = maker(work)
        return PlanResult((value,), 0)

    return plan


# ---------------------------------------------------------------------------
# Residual-style plans (largest residual vs. zero)


def _zero_plan(ctx: RunContext) -> PlanResult:
    return PlanResult((Fraction(0),), 0)


def _zero_real_plan(ctx: RunContext) -> PlanResult:
    return PlanResult((mp.mpf(0),), 0)


def _plan_wz_pair(pair) -> Plan:
    def plan(ctx: RunContext) -> PlanResult:
        report = wz_pair_verify(pair, _WZ_RANGE)
        worst = max(
            (abs(residual) for _, _, residual in report.violations),
            default=Fraction(0),
        )
        return PlanResult((worst,), report.relations_checked)

    return plan


def _plan_wz_telescope(ctx: RunContext) -> PlanResult:
    worst = Fraction(0)
    checked = 0
    for pair in (PAIR_ONE, PAIR_TWO):
        report = telescope_reconstruct(pair, _WZ_RANGE)
        checked += report.relations_checked
        for _, _, residual in report.violations:
            worst = max(worst, abs(residual))
    return PlanResult((worst,), checked)


def _plan_wz_triple_lhs(ctx: RunContext) -> PlanResult:
    values: List[Fraction] = []
    for n in range(_WZ_RANGE + 1):
        s1, _, _ = identity_2_8_2_9(n)
        values.append(s1)
        values.append(s1)
    return PlanResult(tuple(values), 2 * (_WZ_RANGE + 1))


def _plan_wz_triple_rhs(ctx: RunContext) -> PlanResult:
    values: List[Fraction] = []
    for n in range(_WZ_RANGE + 1):
        _, s2, s3 = identity_2_8_2_9(n)
        values.append(s2)
        values.append(s3)
    return PlanResult(tuple(values), 2 * (_WZ_RANGE + 1))


def _plan_ff_counts(ctx: RunContext) -> PlanResult:
    worst = 0
    evaluations = 0
    for p in _FF_PRIMES:
        report = verify_4_1(p)
        worst = max(worst, report.max_abs_residual)
        evaluations += len(report.residuals)
    return PlanResult((Fraction(worst),), evaluations)


def _plan_ao_lhs(ctx: RunContext) -> PlanResult:
    return PlanResult(
        tuple(p ** 3 * greene_nfn(p, 3, 1) for p in _FF_PRIMES), len(_FF_PRIMES)
    )


def _plan_ao_rhs(ctx: RunContext) -> PlanResult:
    return PlanResult(
        tuple(
            Fraction(-newform_coefficient(NEWFORM_F, p) - p) for p in _FF_PRIMES
        ),
        len(_FF_PRIMES),
    )


def _sigma_divisors(n_max: int) -> List[int]:
    sig = [0] * (n_max + 1)
    for d in range(1, n_max + 1):
        for m in range(d, n_max + 1, d):
            sig[m] += d
    return sig


def _plan_qexp_ramanujan(ctx: RunContext) -> PlanResult:
    half = _QEXP_ORDER // 2
    series = (theta_psi(half).dilate(2) ** 4).shift(1)
    sig = _sigma_divisors(_QEXP_ORDER)
    worst = 0
    for m in range(_QEXP_ORDER + 1):
        expected = sig[m] if m % 2 == 1 else 0
        worst = max(worst, abs(series[m] - expected))
    return PlanResult((Fraction(worst),), _QEXP_ORDER + 1)


def _plan_qexp_hecke(ctx: RunContext) -> PlanResult:
    a = lambda n: newform_coefficient(NEWFORM_F, n)
    worst = 0
    relations = 0
    primes = [p for p in range(2, 38) if all(p % d for d in range(2, p))]
    for p in primes:
        if p != 2:
            worst = max(worst, abs(a(p * p) - (a(p) ** 2 - p ** 3)))
            relations += 1
        if a(p) ** 2 > 4 * p ** 3:
            worst = max(worst, a(p) ** 2 - 4 * p ** 3)
        relations += 1
    for m in range(2, 21):
        for n in range(m + 1, 21):
            if math.gcd(m, n) == 1:
                worst = max(worst, abs(a(m * n) - a(m) * a(n)))
                relations += 1
    return PlanResult((Fraction(worst),), relations)


# ---------------------------------------------------------------------------
# Suite plans built on mahler-module checkers


def _plan_wan_suite(ctx: RunContext) -> PlanResult:
    e = min(ctx.effective, 96)
    with mp.workprec(e + 32):
        target = max(_hp_tolerance(e), mp.mpf("1e-14"))
        worst = mp.mpf(0)
        for m in range(7):
            worst = max(worst, wan_moment_check(m, tolerance=target / 8, precision=e))
    return PlanResult((worst,), 7)


def _plan_density_suite(ctx: RunContext) -> PlanResult:
    e = min(ctx.effective, 96)
    with mp.workprec(e + 32):
        target = max(_hp_tolerance(e), mp.mpf("1e-14"))
        worst = mp.mpf(0)
        for m in range(5):
            worst = max(
                worst, density_integral_check(m, tolerance=target / 8, precision=e)
            )
    return PlanResult((worst,), 5)


_R_ALPHA_POINTS = (0.3, 0.7, 1.0)


def _plan_r_alpha(route: str) -> Plan:
    def plan(ctx: RunContext) -> PlanResult:
        e = min(ctx.effective, 80)
        values = tuple(
            r_alpha(alpha, route=route, precision=e) for alpha in _R_ALPHA_POINTS
        )
        return PlanResult(values, len(values))

    return plan


def _plan_fourier(key: str, theta_num: int, theta_den: int) -> Plan:
    def plan(ctx: RunContext) -> PlanResult:
        e = min(ctx.effective, 96)
        with mp.workprec(e + 24):
            theta = mp.pi * theta_num / theta_den
            deviation = fourier_check(key, theta, _FOURIER_TERMS, precision=e)
        return PlanResult((deviation,), _FOURIER_TERMS)

    return plan


def _plan_lambda(spec) -> Plan:
    def plan(ctx: RunContext) -> PlanResult:
        asymmetry = fricke_check(spec, precision=ctx.effective)
        return PlanResult((asymmetry,), 0)

    return plan


# ---------------------------------------------------------------------------
# Statistical plans


def _plan_qmc(name: str) -> Plan:
    def plan(ctx: RunContext) -> PlanResult:
        result = mahler_numeric(
            builtin_descriptor(name),
            samples=ctx.samples,
            shifts=ctx.shifts,
            seed=ctx.rng_seed(),
        )
        return PlanResult(
            (mp.mpf(result.value),),
            result.evaluations,
            error_estimate=mp.mpf(result.error_estimate),
        )

    return plan


def _plan_catalan_ref(ctx: RunContext) -> PlanResult:
    work = ctx.effective + 16
    with mp.workprec(work):
        value = 4 * catalan(work) / mp.pi
    return PlanResult((value,), 0)


def _plan_h_lprime_ref(ctx: RunContext) -> PlanResult:
    return PlanResult((4 * l_prime_at_0(NEWFORM_H, ctx.effective + 16),), 0)


def _plan_theorem_ref(ctx: RunContext) -> PlanResult:
    return PlanResult((_theorem_value(ctx.effective + 16),), 0)


def _plan_s0_ref(ctx: RunContext) -> PlanResult:
    work = ctx.effective + 16
    with mp.workprec(work):
        value = 7 * _zeta3(work) / (2 * mp.pi ** 2)
    return PlanResult((value,), 0)


def _plan_r32_ref(ctx: RunContext) -> PlanResult:
    e = ctx.effective
    with mp.workprec(e + 16):
        value = m_rk_hypergeometric(32, target_abs_error=mp.mpf(2) ** (-e), precision=e + 16)
    return PlanResult((value,), 0)


# ---------------------------------------------------------------------------
# The registry


def _hp(id_, description, lhs, rhs, floor="0", cap=_CAP_HIGH_PRECISION, rule="default"):
    return IdentityCheck(
        id=id_,
        kind="high-precision",
        description=description,
        lhs_plan=lhs,
        rhs_plan=rhs,
        tolerance=mp.mpf(floor),
        precision_cap=cap,
        tolerance_rule=rule,
    )


def _exact(id_, description, lhs, rhs):
    return IdentityCheck(
        id=id_,
        kind="exact",
        description=description,
        lhs_plan=lhs,
        rhs_plan=rhs,
        tolerance=Fraction(0),
        precision_cap=DEFAULT_PRECISION,
    )


def _stat(id_, description, lhs, rhs):
    return IdentityCheck(
        id=id_,
        kind="statistical",
        description=description,
        lhs_plan=lhs,
        rhs_plan=rhs,
        tolerance=mp.mpf("5e-3"),
        precision_cap=_CAP_STATISTICAL,
        tolerance_rule="statistical",
    )


def _build_registry() -> Dict[str, IdentityCheck]:
    checks: List[IdentityCheck] = [
        # -- exact ----------------------------------------------------------
        _exact(
            "wz-pair-1",
            "F(n+1,k)-F(n,k) = G(n,k+1)-G(n,k) exactly on 0 <= k <= n <= 500 "
            "for F = T(n,k)(2n+1)^2/(2n-2k+1), "
            "G = -T(n,k) k^2 (2n+1)^2/((n+1)^2 (2n-2k+3)), "
            "T(n,k) = 2^(-4n-4k) C(2k,k)^2 C(2n,n)^2; "
            "largest residual vs 0",
            _plan_wz_pair(PAIR_ONE),
            _zero_plan,
        ),
        _exact(
            "wz-pair-2",
            "F(n+1,k)-F(n,k) = G(n,k+1)-G(n,k) exactly on 0 <= k <= n <= 500 "
            "for F = T(n,k)(2n+1)^2/(n+k+1), "
            "G = T(n,k) k^2 (2n+1)^2/((n+1)^2 (n+k+1)); "
            "largest residual vs 0",
            _plan_wz_pair(PAIR_TWO),
            _zero_plan,
        ),
        _exact(
            "wz-telescope",
            "h(n) = h(0) + sum_{j<=n} (F(j,j) + G(j-1,j) - G(j-1,0)) "
            "reconstructs the row sums h(n) = sum_{k<=n} F(n,k) exactly for "
            "both certificate pairs, n <= 500; largest residual vs 0",
            _plan_wz_telescope,
            _zero_plan,
        ),
        _exact(
            "wz-2.8-2.9",
            "sum_{k<=n} 2^(-4k) C(2k,k)^2/(2n-2k+1) "
            "= sum_{k<=n} 2^(-4k) C(2k,k)^2/(n+k+1) "
            "= 2^(4n)/((2n+1)^2 C(2n,n)^2) sum_{k<=n} (4k+1) 2^(-8k) C(2k,k)^4 "
            "exactly for every n <= 500",
            _plan_wz_triple_lhs,
            _plan_wz_triple_rhs,
        ),
        _exact(
            "ff-4.1",
            "affine point count of (x^2+1)(y^2+1)(z^2+1)(w^2+1) = 16 t xyzw "
            "over F_p equals p^3 4F3(t^2) + 4 phi(-1) p^2 2F1(t^2) "
            "- 3 eps(t^2-1) p^2 + p^3 + 8(phi(-1)+1) p^2 - 16(phi(-1)+1) p "
            "- 3p - 8(phi(-1)+1) + 1 for all t in F_p*, p in {3,5,7,11,13}; "
            "largest residual vs 0",
            _plan_ff_counts,
            _zero_plan,
        ),
        _exact(
            "ff-ahlgren-ono",
            "p^3 4F3(1) = -a_p - p for p in {3,5,7,11,13}, with 4F3 the "
            "finite-field hypergeometric sum (all upper phi, all lower eps) "
            "and a_p the p-th coefficient of eta(2t)^4 eta(4t)^4",
            _plan_ao_lhs,
            _plan_ao_rhs,
        ),
        _exact(
            "qexp-ramanujan",
            "q psi(q^2)^4 = sum over odd m of sigma(m) q^m through q^200, "
            "psi the triangular-number theta series; largest coefficient "
            "residual vs 0",
            _plan_qexp_ramanujan,
            _zero_plan,
        ),
        _exact(
            "qexp-f-coeffs",
            "coefficients of eta(2t)^4 eta(4t)^4 satisfy a_mn = a_m a_n for "
            "coprime m,n <= 20, a_p^2 = a_{p^2} + p^3 for odd p <= 37, and "
            "a_p^2 <= 4 p^3; largest violation vs 0",
            _plan_qexp_hecke,
            _zero_plan,
        ),
        # -- high-precision --------------------------------------------------
        _hp(
            "thm-1.1",
            "4 log 2 - sum_{n>=1} (1/(2n)) C(2n,n)^4 2^(-8n) "
            "= (192/pi^4) L(f,4) + 7 zeta(3)/pi^2, "
            "f the weight-4 level-8 newform eta(2t)^4 eta(4t)^4; series side "
            "Levin-accelerated from exact partials, L-side by Mellin-split "
            "incomplete gammas (no machinery shared between the routes)",
            _plan_theorem_series,
            _plan_theorem_lvalue,
        ),
        _hp(
            "eq-1.5",
            "6F5(3/2,3/2,3/2,3/2,1,1; 2,2,2,2,2; 1) "
            "= 128 log 2 - 6144 L(f,4)/pi^4 - 224 zeta(3)/pi^2",
            _plan_6f5_series,
            _plan_6f5_closed,
        ),
        _hp(
            "eq-2.4",
            "-8 int_0^1 ((1+k^2)/(1-k^2)) K(k) K'(k) log k dk = (192/pi) L(f,4)",
            _quad_plan(_kk_log_k_full, lambda: mp.mpf(-8)),
            _const_plan(lambda w: 192 / mp.pi * _l_f4(w)),
        ),
        _hp(
            "eq-2.5",
            "-8 int_0^1 (2k/(1-k^2)) K(k) K'(k) log k dk = 7 pi zeta(3)",
            _quad_plan(_kk_log_k_odd, lambda: mp.mpf(-8)),
            _const_plan(lambda w: 7 * mp.pi * _zeta3(w)),
        ),
        _hp(
            "e-wan",
            "int_0^1 (-log(1-k^2)/k) K(k) K'(k) dk = (7/8) pi zeta(3)",
            _quad_plan(_kk_wan),
            _const_plan(lambda w: mp.mpf(7) / 8 * mp.pi * _zeta3(w)),
        ),
        _hp(
            "eq-2.6",
            "(8/pi^3) int_0^1 K(k) K'(k) log((1+k)/(1-k)) dk/k "
            "= (192/pi^4) L(f,4) + 7 zeta(3)/pi^2",
            _quad_plan(_kk_atanh, lambda: 8 / mp.pi ** 3),
            _const_plan(_theorem_value),
        ),
        _hp(
            "eq-2.7",
            "int_0^1 K(k) K'(k) log(1+k) dk/k = (12/pi) L(f,4)",
            _quad_plan(_kk_log1p),
            _const_plan(lambda w: 12 / mp.pi * _l_f4(w)),
        ),
        _hp(
            "eq-2.8-analytic",
            "int_0^1 K(k) K'(k) log(1-k) dk/k "
            "= -(12/pi) L(f,4) - (7/8) pi zeta(3)",
            _quad_plan(_kk_log1m),
            _const_plan(
                lambda w: -12 / mp.pi * _l_f4(w) - mp.mpf(7) / 8 * mp.pi * _zeta3(w)
            ),
        ),
        _hp(
            "eq-2.10",
            "(8/pi^3) int_0^1 K(k) K'(k) log((1+k)/(1-k)) dk/k "
            "= 2 sum_{n>=0} S_n/(2n+1)^2, "
            "S_n = sum_{k<=n} (4k+1) 2^(-8k) C(2k,k)^4 exact; the double sum "
            "is evaluated by exact summation by parts (see eq-2.11)",
            _quad_plan(_kk_atanh, lambda: 8 / mp.pi ** 3),
            _plan_swap_sum,
        ),
        _hp(
            "eq-2.11",
            "14 zeta(3)/pi^2 + sum_{n>=0} 2^(-8n) C(2n,n)^4/(2n+1) "
            "= 2 sum_{n>=0} S_n/(2n+1)^2 with exact inner partial sums S_n;  "
            "right side via summation by parts: "
            "2 sum_j (S_j - S_{j-1}) (pi^2/8 - sum_{n<j} (2n+1)^-2)",
            _plan_eq_2_11_series,
            _plan_swap_sum,
        ),
        _hp(
            "wan-moments",
            "int_0^1 k^m K(k) K'(k) dk = (pi^2/8) "
            "[Gamma((m+1)/2)/Gamma((m+2)/2)]^2 "
            "4F3(1/2,1/2,(m+1)/2,(m+1)/2; 1,(m+2)/2,(m+2)/2; 1) "
            "for m = 0..6; largest quadrature-vs-series deviation vs 0",
            _plan_wan_suite,
            _zero_real_plan,
            floor="1e-8",
        ),
        _hp(
            "eq-3.2",
            "-14 zeta(3)/pi^2 + 4 log 2 "
            "= 1 + sum_{n>=1} ((4n+1)/((2n)(2n+1))) C(2n,n)^4 2^(-8n)",
            _plan_eq_3_2_closed,
            _plan_eq_3_2_series,
        ),
        _hp(
            "eq-3.5-vs-3.6",
            "route agreement for R(alpha) "
            "= m(alpha(u+1/u)(z+1/z) + (x+1/x)(y+1/y)) at "
            "alpha in {0.3, 0.7, 1}: polylog route (4/pi^2) chi_3(alpha) vs "
            "k-integral route (4/pi^2) int_0^1 mu(alpha k) K'(k) dk, "
            "mu(c) = m(c + x + 1/x + y + 1/y)",
            _plan_r_alpha("polylog"),
            _plan_r_alpha("k-integral"),
            floor="1e-8",
        ),
        _hp(
            "eq-3.7",
            "int int F(|cos pi s cos pi t|) ds dt "
            "= (4/pi^2) int_0^1 F(k) K'(k) dk for F = k^m, m = 0..4; "
            "largest deviation vs 0 (left side factors as a squared cosine "
            "moment)",
            _plan_density_suite,
            _zero_real_plan,
            floor="1e-8",
        ),
        _hp(
            "fourier-3.8",
            "K(sin t) cos t = (pi/2) sum_{n>=0} a_n (sin 4nt + sin(4n+2)t), "
            "a_n = 2^(-4n) C(2n,n)^2, truncated at 400 terms and compared at "
            "t = pi/6; deviation vs 0 within the Abel/Dirichlet tail bound "
            "pi a_N / |sin 2t|",
            _plan_fourier("3.8", 1, 6),
            _zero_real_plan,
            floor="1e-3",
        ),
        _hp(
            "fourier-3.9",
            "K(cos t) cos t = (pi/2) sum_{n>=0} a_n (cos 4nt + cos(4n+2)t), "
            "a_n = 2^(-4n) C(2n,n)^2, truncated at 400 terms and compared at "
            "t = pi/4; deviation vs 0",
            _plan_fourier("3.9", 1, 4),
            _zero_real_plan,
            floor="1e-3",
        ),
        _hp(
            "fourier-3.10",
            "m(4 sin t) = log 2 - sum_{n>=1} a_n cos(4nt)/(4n) "
            "- sum_{n>=0} a_n cos((4n+2)t)/(4n+2) truncated at 400 terms and "
            "compared at t = pi/3 against the arithmetic-geometric-mean "
            "route; deviation vs 0 within the absolute tail bound "
            "1/(2 pi (N-1))",
            _plan_fourier("3.10", 1, 3),
            _zero_real_plan,
            floor="1e-3",
        ),
        _hp(
            "eq-4.3",
            "(192/pi^4) L(f,4) - 7 zeta(3)/pi^2 "
            "= sum_{n>=0} 2^(-8n) C(2n,n)^4/(2n+1)",
            _plan_eq_4_3_closed,
            _plan_eq_4_3_series,
        ),
        _hp(
            "lambda-symmetry-f",
            "Lambda(s) = (sqrt(8)/(2 pi))^s Gamma(s) L(f,s) satisfies "
            "Lambda(s) = Lambda(4-s) on a probe grid, measured without "
            "assuming the functional equation; largest asymmetry vs 0",
            _plan_lambda(NEWFORM_F),
            _zero_real_plan,
            cap=_CAP_LAMBDA,
            rule="fricke",
        ),
        _hp(
            "lambda-symmetry-h",
            "Lambda(s) = (4/pi)^s Gamma(s) L(h,s) satisfies "
            "Lambda(s) = Lambda(3-s) on a probe grid for the weight-3 "
            "level-16 form h = eta(4t)^6; largest asymmetry vs 0",
            _plan_lambda(NEWFORM_H),
            _zero_real_plan,
            cap=_CAP_LAMBDA,
            rule="fricke",
        ),
        # -- statistical ------------------------------------------------------
        _stat(
            "eq-1.1",
            "m(x + 1/x + y + 1/y - 4) = 4G/pi, G Catalan's constant; "
            "lattice QMC vs Levin-accelerated series",
            _plan_qmc("p4"),
            _plan_catalan_ref,
        ),
        _stat(
            "eq-1.2",
            "m((x+1/x)(y+1/y)(z+1/z) - 8) = 4 L'(h,0) for the weight-3 "
            "level-16 newform h = eta(4t)^6; lattice QMC vs completed-L "
            "derivative",
            _plan_qmc("q8"),
            _plan_h_lprime_ref,
        ),
        _stat(
            "thm-1.1-torus",
            "m((x+1/x)(y+1/y)(z+1/z)(w+1/w) - 16) "
            "= (192/pi^4) L(f,4) + 7 zeta(3)/pi^2; 4-D lattice QMC vs L-route",
            _plan_qmc("r16"),
            _plan_theorem_ref,
        ),
        _stat(
            "eq-4.4",
            "m(x + 1/x + y + 1/y + z + 1/z + w + 1/w) = 7 zeta(3)/(2 pi^2); "
            "4-D lattice QMC vs Euler-Maclaurin zeta",
            _plan_qmc("s0"),
            _plan_s0_ref,
        ),
        _stat(
            "m-r32",
            "m((x+1/x)(y+1/y)(z+1/z)(w+1/w) - 32) = Re(log 32 "
            "- (8/32^2) 6F5(3/2,3/2,3/2,3/2,1,1; 2,2,2,2,2; 256/32^2)); "
            "4-D lattice QMC vs hypergeometric series",
            _plan_qmc("r:32"),
            _plan_r32_ref,
        ),
    ]
    registry: Dict[str, IdentityCheck] = {}
    for check in checks:
        if check.id in registry:
            raise ValueError(f"duplicate check id {check.id}")
        if check.kind not in KINDS:
            raise ValueError(f"bad kind {check.kind} for {check.id}")
        registry[check.id] = check
    return registry


_REGISTRY = _build_registry()


def check_ids() -> Tuple[str, ...]:
    return tuple(_REGISTRY)


def get_check(check_id: str) -> IdentityCheck:
    try:
        return _REGISTRY[check_id]
    except KeyError:
        suggestions = difflib.get_close_matches(
            check_id, list(_REGISTRY), n=3, cutoff=0.4
        )
        raise UnknownCheckError(check_id, suggestions) from None


_PLAN_FAILURES = (
    NoConvergence,
    ResourceLimitError,
    IntegrandError,
    ArithmeticError,
)


def _validate_run_args(precision: int, samples: int, shifts: int) -> None:
    if not 32 <= precision <= 4096:
        raise ValueError(f"precision must lie in [32, 4096], got {precision}")
    if samples < 1 << 10 or samples & (samples - 1):
        raise ValueError(f"samples must be a power of two >= 1024, got {samples}")
    if shifts < 8:
        raise ValueError(f"shifts must be >= 8, got {shifts}")


def run_check(
    check_id: str,
    precision: int = DEFAULT_PRECISION,
    *,
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
    shifts: int = DEFAULT_SHIFTS,
) -> CheckResult:
    """Execute both plans of one check and score the deviation.

    Deterministic for fixed arguments: QMC seeds derive from (seed, id),
    series and quadrature targets from the effective precision only.  A
    plan failure (lost acceleration confidence, resource limit, integrand
    blow-up) is reported as a failed CheckResult with the failure note, not
    an exception; only an unknown id or invalid arguments raise.
    """
    check = get_check(check_id)
    _validate_run_args(precision, samples, shifts)
    ctx = RunContext(
        check_id=check_id,
        precision=precision,
        effective=check.effective_precision(precision),
        seed=seed,
        samples=samples,
        shifts=shifts,
    )
    start = time.perf_counter()
    note = ""
    try:
        left = check.lhs_plan(ctx)
        right = check.rhs_plan(ctx)
        if len(left.values) != len(right.values):
            raise ArithmeticError(
                f"plan shape mismatch: {len(left.values)} vs {len(right.values)}"
            )
        lhs, rhs, deviation = _score(check, ctx, left, right)
        error_estimate = _combined_error(left, right)
        tolerance = check.tolerance_at(precision, error_estimate)
        with mp.workprec(max(ctx.effective, 64) + 16):
            passed = bool(deviation <= tolerance)
        evaluations = left.evaluations + right.evaluations
    except _PLAN_FAILURES as exc:
        lhs = rhs = deviation = None
        tolerance = check.tolerance_at(precision)
        passed = False
        note = f"{type(exc).__name__}: {exc}"
        evaluations = 0
    wall_ms = int(round((time.perf_counter() - start) * 1000))
    return CheckResult(
        id=check.id,
        kind=check.kind,
        lhs=lhs,
        rhs=rhs,
        deviation=deviation,
        tolerance=tolerance,
        passed=passed,
        wall_ms=wall_ms,
        evaluations=evaluations,
        seed_used=seed,
        note=note,
    )


def _combined_error(left: PlanResult, right: PlanResult):
    estimates = [
        e for e in (left.error_estimate, right.error_estimate) if e is not None
    ]
    if not estimates:
        return None
    with mp.workprec(64):
        return mp.sqrt(mp.fsum(e ** 2 for e in estimates))


def _score(check: IdentityCheck, ctx: RunContext, left: PlanResult, right: PlanResult):
    """Worst-part deviation; lhs/rhs from that part (ties: last part)."""
    pairs = list(zip(left.values, right.values))
    exact = all(
        isinstance(v, (Fraction, int)) for pair in pairs for v in pair
    )
    if exact:
        worst_idx = 0
        worst = Fraction(0)
        for i, (a, b) in enumerate(pairs):
            d = abs(Fraction(a) - Fraction(b))
            if d >= worst:
                worst, worst_idx = d, i
        lhs, rhs = pairs[worst_idx]
        return lhs, rhs, worst
    with mp.workprec(max(ctx.effective, 64) + 16):
        worst_idx = 0
        worst = mp.mpf(0)
        for i, (a, b) in enumerate(pairs):
            d = abs(_to_mpf(a) - _to_mpf(b))
            if d >= worst:
                worst, worst_idx = d, i
        lhs, rhs = pairs[worst_idx]
        return lhs, rhs, worst


def run_all(
    tags: Optional[Iterable[str]] = None,
    precision: int = DEFAULT_PRECISION,
    *,
    seed: int = DEFAULT_SEED,
    samples: int = DEFAULT_SAMPLES,
    shifts: int = DEFAULT_SHIFTS,
) -> List[CheckResult]:
    """Run every check whose kind is in tags (all kinds when tags is None),
    in registry order.  Unknown tags raise before any check runs."""
    if tags is None:
        wanted = set(KINDS)
    else:
        wanted = {tags} if isinstance(tags, str) else set(tags)
        unknown = wanted - set(KINDS)
        if unknown:
            raise ValueError(
                f"unknown filter tags {sorted(unknown)}; valid: {', '.join(KINDS)}"
            )
    return [
        run_check(check_id, precision, seed=seed, samples=samples, shifts=shifts)
        for check_id, check in _REGISTRY.items()
        if check.kind in wanted
    ]


def summarize(results: Sequence[CheckResult]) -> Dict[str, int]:
    counts = {"total": len(results), "passed": 0, "failed": 0}
    for kind in KINDS:
        counts[kind] = 0
    for result in results:
        counts["passed" if result.passed else "failed"] += 1
        counts[result.kind] += 1
    return counts
