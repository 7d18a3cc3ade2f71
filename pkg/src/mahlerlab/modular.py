"""Eta-product q-expansions, theta series, and L-values of the two newforms
the identities here revolve around:

    f = eta(2t)^4 eta(4t)^4   weight 4, level 8
    h = eta(4t)^6             weight 3, level 16 (CM by Q(i))

L-values come from the Mellin split of the completed function: with
u0 = 1/sqrt(level),

    Lambda(s) = G(s) + sign * G(weight - s),
    G(s) = level^(s/2) * sum_n a_n (2 pi n)^(-s) Gamma(s, 2 pi n u0),

which converges like exp(-2 pi u0 n).  At the integer arguments the artifact
needs, Gamma(s, x) is an elementary finite sum and Gamma(0, x) = E1(x).

fricke_check never assumes the functional equation: it integrates the
q-series along the imaginary axis directly on [delta, T] and compares
Lambda(s) against sign * Lambda(weight - s).  Under modularity the neglected
piece below delta is ~ exp(-2 pi / (level delta)); if the form were not
modular the main parts would disagree loudly, which is the point of the
check.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Tuple

import numpy as np
from mpmath import mp

from .precision import ResourceLimitError
from .quadrature import tanh_sinh_interval
from .special import gamma_upper_int

__all__ = [
    "QSeries",
    "NewformSpec",
    "NEWFORM_F",
    "NEWFORM_H",
    "FunctionalEquationViolation",
    "ResourceLimitError",
    "eta_qexp",
    "theta_psi",
    "theta_phi",
    "newform_coefficient",
    "l_value",
    "l_prime_at_0",
    "fricke_check",
    "psi4_phi4_coefficients",
    "dump_coefficient_file",
    "load_coefficient_file",
]


class FunctionalEquationViolation(ArithmeticError):
    """Lambda(s) and sign*Lambda(weight-s) disagree beyond threshold."""

    def __init__(self, message, asymmetry=None, threshold=None):
        super().__init__(message)
        self.asymmetry = asymmetry
        self.threshold = threshold


_COEFF_LIMIT = 10 ** 6


@dataclass(frozen=True)
class QSeries:
    """Truncated integer power series: coeffs[i] is the q^i coefficient,
    exact through q^order."""

    coeffs: Tuple[int, ...]
    order: int

    def __post_init__(self):
        if self.order < 0 or len(self.coeffs) != self.order + 1:
            raise ValueError("coeffs must hold exactly order+1 entries")

    def __getitem__(self, i: int) -> int:
        return self.coeffs[i] if 0 <= i <= self.order else 0

    def __add__(self, other: "QSeries") -> "QSeries":
        n = min(self.order, other.order)
        return QSeries(tuple(self[i] + other[i] for i in range(n + 1)), n)

    def __sub__(self, other: "QSeries") -> "QSeries":
        n = min(self.order, other.order)
        return QSeries(tuple(self[i] - other[i] for i in range(n + 1)), n)

    def __mul__(self, other: "QSeries") -> "QSeries":
        n = min(self.order, other.order)
        out = [0] * (n + 1)
        # iterate the sparser factor's support on the outside
        a, b = (self, other) if self.nnz() <= other.nnz() else (other, self)
        for i, ca in enumerate(a.coeffs):
            if ca == 0 or i > n:
                continue
            lim = n - i
            for j, cb in enumerate(b.coeffs[: lim + 1]):
                if cb:
                    out[i + j] += ca * cb
        return QSeries(tuple(out), n)

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            raise ValueError("only nonnegative integer powers")
        result = QSeries((1,) + (0,) * self.order, self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def shift(self, k: int) -> "QSeries":
        """Multiply by q^k."""
        if k < 0:
            raise ValueError("shift must be nonnegative")
        return QSeries((0,) * k + self.coeffs, self.order + k)

    def dilate(self, scale: int, alternate: bool = False) -> "QSeries":
        """Substitute q -> q^scale (or q -> -q^scale when alternate)."""
        if scale < 1:
            raise ValueError("scale must be >= 1")
        n = self.order * scale
        out = [0] * (n + 1)
        for i, c in enumerate(self.coeffs):
            if c:
                out[i * scale] = -c if (alternate and i % 2) else c
        return QSeries(tuple(out), n)

    def nnz(self) -> int:
        return sum(1 for c in self.coeffs if c)


def eta_qexp(scale: int, order: int) -> Tuple[QSeries, Fraction]:
    """eta(scale*tau) without its q-power prefactor: the pentagonal-number
    series prod (1 - q^(scale*n)), plus the prefactor exponent scale/24."""
    if scale < 1 or order < 1:
        raise ValueError("need scale >= 1 and order >= 1")
    out = [0] * (order + 1)
    j = 0
    while True:
        placed = False
        for jj in (j, -j) if j else (0,):
            e = scale * jj * (3 * jj - 1) // 2
            if e <= order:
                out[e] += -1 if jj % 2 else 1
                placed = True
        if not placed:
            break
        j += 1
    return QSeries(tuple(out), order), Fraction(scale, 24)


def theta_psi(order: int) -> QSeries:
    """psi(q) = sum q^(n(n+1)/2)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    out = [0] * (order + 1)
    n = 0
    while n * (n + 1) // 2 <= order:
        out[n * (n + 1) // 2] += 1
        n += 1
    return QSeries(tuple(out), order)


def theta_phi(order: int) -> QSeries:
    """phi(q) = 1 + 2 sum q^(n^2)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    out = [0] * (order + 1)
    out[0] = 1
    n = 1
    while n * n <= order:
        out[n * n] = 2
        n += 1
    return QSeries(tuple(out), order)


# ---------------------------------------------------------------------------
# Newforms


@dataclass(eq=False)
class NewformSpec:
    """Newform with exact integer coefficients from a q-expansion recipe.

    recipe(order) must return the normalized expansion sum a_n q^n through
    q^order (so coeffs[1] = 1).  The coefficient cache grows by amortized
    doubling under a lock; reads of the grown prefix are immutable.
    """

    name: str
    weight: int
    level: int
    fricke_sign: int
    recipe: Callable[[int], QSeries]
    character_note: str = ""
    _coeffs: List[int] = field(default_factory=list, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    def ensure(self, n: int) -> None:
        if n >= _COEFF_LIMIT:
            raise ResourceLimitError(
                f"{self.name}: coefficient demand {n} exceeds limit {_COEFF_LIMIT}"
            )
        with self._lock:
            if len(self._coeffs) > n:
                return
            new_order = max(2 * len(self._coeffs), n, 16)
            series = self.recipe(new_order)
            if series[1] != 1:
                raise ValueError(f"{self.name}: recipe is not normalized (a_1 != 1)")
            if self._coeffs and tuple(self._coeffs) != series.coeffs[: len(self._coeffs)]:
                raise ValueError(f"{self.name}: recipe changed already-cached coefficients")
            self._coeffs = list(series.coeffs)

    def coefficient(self, n: int) -> int:
        if n < 1:
            raise ValueError(f"coefficient index must be >= 1, got {n}")
        self.ensure(n)
        return self._coeffs[n]

    def cached_order(self) -> int:
        """Largest index currently held by the coefficient cache (0 when
        nothing has been computed yet)."""
        with self._lock:
            return max(0, len(self._coeffs) - 1)

    def support_step(self) -> int:
        """Exponent stride of the nonzero support (2 for odd-only, 4 for
        n = 1 mod 4), used to walk powers cheaply."""
        self.ensure(64)
        step = 0
        for n in range(2, 65):
            if self._coeffs[n]:
                step = math.gcd(step, n - 1)
        return step or 1


def _recipe_f(order: int) -> QSeries:
    e2, _ = eta_qexp(2, order)
    e4, _ = eta_qexp(4, order)
    return (e2 ** 4 * e4 ** 4).shift(1)


def _recipe_h(order: int) -> QSeries:
    e4, _ = eta_qexp(4, order)
    return (e4 ** 6).shift(1)


NEWFORM_F = NewformSpec(
    name="f",
    weight=4,
    level=8,
    fricke_sign=1,
    recipe=_recipe_f,
    character_note="trivial character",
)

NEWFORM_H = NewformSpec(
    name="h",
    weight=3,
    level=16,
    fricke_sign=1,
    recipe=_recipe_h,
    character_note="character of conductor 4 (CM by Q(i)); completion "
    "adopted as weight 3, level 16, sign +1 and validated by fricke_check",
)


def newform_coefficient(spec: NewformSpec, n: int) -> int:
    """Exact a_n."""
    return spec.coefficient(n)


# ---------------------------------------------------------------------------
# L-values via the Mellin split


def _term_count(level: int, weight: int, work: int) -> int:
    u0 = 1.0 / math.sqrt(level)
    target = (work + 8) * math.log(2)
    n = max(16, int(target / (2 * math.pi * u0)))
    # polynomial slack: |a_n| <= d(n) n^((weight-1)/2) <= n^(weight/2 + 1)
    for _ in range(4):
        n = int((target + (weight / 2 + 1) * math.log(n + 1)) / (2 * math.pi * u0)) + 4
    return n


def _g_split(spec: NewformSpec, s, u0, n_terms: int, work: int):
    """G(s) = level^(s/2) sum a_n (2 pi n)^(-s) Gamma(s, 2 pi n u0)."""
    with mp.workprec(work):
        two_pi = 2 * mp.pi
        s_int = int(s) if s == int(s) else None
        total = mp.mpf(0)
        for n in range(1, n_terms + 1):
            a = spec._coeffs[n]
            if not a:
                continue
            x = two_pi * n * u0
            if s_int is not None:
                g = gamma_upper_int(s_int, x, work)
            else:
                g = mp.gammainc(mp.mpf(s), x)
            total += a * g / (two_pi * n) ** s
        return mp.mpf(spec.level) ** (mp.mpf(s) / 2) * total


def l_value(spec: NewformSpec, s, precision: int = 64):
    """L(spec, s) for real s via the exponentially convergent Mellin split."""
    work = precision + 24
    with mp.workprec(work):
        s = mp.mpf(s)
        u0 = 1 / mp.sqrt(spec.level)
        n_terms = _term_count(spec.level, spec.weight, work)
        spec.ensure(n_terms)
        lam = _g_split(spec, s, u0, n_terms, work) + spec.fricke_sign * _g_split(
            spec, spec.weight - s, u0, n_terms, work
        )
        if s == int(s):
            gamma_s = mp.mpf(math.factorial(int(s) - 1))
        else:
            gamma_s = mp.gamma(s)
        v = lam * (2 * mp.pi / mp.sqrt(spec.level)) ** s / gamma_s
    with mp.workprec(precision):
        return +v


def l_prime_at_0(spec: NewformSpec, precision: int = 64):
    """L'(spec, 0) = sign * (sqrt(level)/(2 pi))^weight * (weight-1)! * L(weight)."""
    k = spec.weight
    with mp.workprec(precision + 16):
        v = (
            spec.fricke_sign
            * (mp.sqrt(spec.level) / (2 * mp.pi)) ** k
            * mp.mpf(math.factorial(k - 1))
            * l_value(spec, k, precision + 16)
        )
    with mp.workprec(precision):
        return +v


# ---------------------------------------------------------------------------
# Functional equation check (no functional equation assumed)

_FRICKE_S = ("2.25", "2.5", "3.0")


def fricke_check(spec: NewformSpec, precision: int = 64):
    """Max over s in {2.25, 2.5, 3.0} of |Lambda(s) - sign*Lambda(weight-s)|,
    with Lambda computed by direct quadrature of the q-series on the
    imaginary axis; the functional equation is tested, never used.

    Raises FunctionalEquationViolation when the asymmetry reaches 2^(20-P).
    """
    p = precision
    with mp.workprec(p + 48):
        threshold = mp.mpf(2) ** (20 - p)
        ln2 = mp.log(2)
        delta = min(mp.mpf("0.008"), 2 * mp.pi / (spec.level * (p + 30) * ln2))
        t_hi = ((p + 20) * ln2 + 10) / (2 * mp.pi)
        # q-series truncation: n^(weight/2+1) exp(-2 pi delta n) < 2^-(p+20)
        n_terms = 64
        while (n_terms ** (spec.weight / 2 + 1)) * mp.exp(-2 * mp.pi * delta * n_terms) > mp.mpf(
            2
        ) ** (-(p + 20)):
            n_terms += 64
        if n_terms >= _COEFF_LIMIT:
            raise ResourceLimitError(f"fricke_check needs {n_terms} coefficients")
        spec.ensure(n_terms)
        step = spec.support_step()
        support = [
            (n, spec._coeffs[n]) for n in range(1, n_terms + 1) if spec._coeffs[n]
        ]

        memo: Dict[object, object] = {}
        two_pi = 2 * mp.pi

        def f_iu(u):
            v = memo.get(u)
            if v is None:
                x = mp.exp(-two_pi * u)
                xs = x ** step
                pw = mp.mpf(1)
                at = 1
                v = mp.mpf(0)
                for n, a in support:
                    while at < n:
                        pw *= xs
                        at += step
                    v += a * pw
                v *= x  # support walks n-1 in units of step; x^1 prefactor
                memo[u] = v
            return v

        tol = mp.mpf(2) ** (-(p + 16))
        lam: Dict[str, object] = {}
        svals = []
        for s_str in _FRICKE_S:
            s = mp.mpf(s_str)
            svals.append(s)
            svals.append(spec.weight - s)
        for s in svals:
            key = mp.nstr(s, 12)
            if key in lam:
                continue
            r = tanh_sinh_interval(
                lambda u, s=s: f_iu(u) * u ** (s - 1),
                delta,
                t_hi,
                tol,
                precision=p + 32,
            )
            lam[key] = mp.mpf(spec.level) ** (s / 2) * r.value
        asym = mp.mpf(0)
        for s_str in _FRICKE_S:
            s = mp.mpf(s_str)
            a = lam[mp.nstr(s, 12)]
            b = lam[mp.nstr(spec.weight - s, 12)]
            asym = max(asym, abs(a - spec.fricke_sign * b))
    if asym >= threshold:
        raise FunctionalEquationViolation(
            f"{spec.name}: Lambda asymmetry {mp.nstr(asym, 6)} at {precision} bits "
            f"exceeds 2^(20-P) = {mp.nstr(threshold, 6)}; wrong sign or bad coefficients",
            asymmetry=asym,
            threshold=threshold,
        )
    with mp.workprec(p):
        return +asym


# ---------------------------------------------------------------------------
# Fast bulk coefficients for f (divisor-sum convolution)


def _sigma_sieve(n: int) -> np.ndarray:
    sig = np.zeros(n + 1, dtype=np.int64)
    for d in range(1, n + 1):
        sig[d::d] += d
    return sig


def psi4_phi4_coefficients(n_max: int) -> np.ndarray:
    """Exact coefficients of q psi^4(q^2) phi^4(-q^2) through q^n_max.

    q psi^4(q^2) = sum over odd m of sigma(m) q^m and phi^4(-q^2) has
    coefficient (-1)^j 8 sigma*(j) at q^(2j) with sigma*(j) = sigma(j) -
    4 sigma(j/4); the product is one integer convolution, done as two
    float64 FFT convolutions after a 9-bit split of the first factor, with
    an integrality check on reassembly.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    sig = _sigma_sieve(n_max)
    a = np.zeros(n_max + 1, dtype=np.int64)
    odd = np.arange(1, n_max + 1, 2)
    a[odd] = sig[odd]
    b = np.zeros(n_max + 1, dtype=np.int64)
    b[0] = 1
    j = np.arange(1, n_max // 2 + 1)
    sig_star = sig[j].copy()
    j4 = j[j % 4 == 0]
    sig_star[j4 - 1] -= 4 * sig[j4 // 4]
    b[2 * j] = np.where(j % 2 == 1, -8, 8) * sig_star

    a_hi, a_lo = a >> 9, a & 511
    size = 1
    while size < 2 * (n_max + 1):
        size *= 2
    fb = np.fft.rfft(b, size)
    conv_hi = np.fft.irfft(np.fft.rfft(a_hi, size) * fb, size)[: n_max + 1]
    conv_lo = np.fft.irfft(np.fft.rfft(a_lo, size) * fb, size)[: n_max + 1]
    hi = np.rint(conv_hi)
    lo = np.rint(conv_lo)
    resid = max(np.abs(conv_hi - hi).max(), np.abs(conv_lo - lo).max())
    if resid > 0.25:
        raise ArithmeticError(f"FFT convolution residual {resid} too large to round")
    return (hi.astype(np.int64) << 9) + lo.astype(np.int64)


# ---------------------------------------------------------------------------
# On-disk coefficient cache


def dump_coefficient_file(spec: NewformSpec, path: str, n_max: int) -> None:
    """Write 'n a_n' lines for 1 <= n <= n_max."""
    spec.ensure(n_max)
    with open(path, "w") as fh:
        for n in range(1, n_max + 1):
            fh.write(f"{n} {spec._coeffs[n]}\n")


def load_coefficient_file(spec: NewformSpec, path: str) -> int:
    """Prime the cache from a 'n a_n' file; returns the count loaded.

    Entries are validated against the recipe's first 64 coefficients, so a
    stale or foreign file fails loudly rather than poisoning L-values.
    """
    entries: Dict[int, int] = {}
    with open(path) as fh:
        for line in fh:
            parts = line.split()
            if not parts:
                continue
            n, an = int(parts[0]), int(parts[1])
            entries[n] = an
    if not entries:
        return 0
    top = max(entries)
    coeffs = [0] * (top + 1)
    for n, an in entries.items():
        if not 1 <= n <= top:
            raise ValueError(f"bad index {n} in {path}")
        coeffs[n] = an
    spec.ensure(min(64, top))
    with spec._lock:
        check = min(len(spec._coeffs) - 1, top)
        for n in range(1, check + 1):
            if coeffs[n] != spec._coeffs[n]:
                raise ValueError(
                    f"{path} disagrees with {spec.name} recipe at n = {n}"
                )
        if top >= len(spec._coeffs):
            spec._coeffs = coeffs
    return top
