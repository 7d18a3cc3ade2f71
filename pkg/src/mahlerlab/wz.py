"""Exact verification of WZ certificate pairs and the binomial identities
they prove.

Everything here is big-rational arithmetic: a pass is a proof for the
verified range, there are no tolerances.  The two certificate pairs share
the common factor T(n,k) = 2^(-4k-4n) C(2k,k)^2 C(2n,n)^2; the fast
verification route divides the pair relation through by T, which cancels
every binomial coefficient and every power of two symbolically and leaves a
relation between O(1)-size rationals:

    T(n+1,k)/T(n,k) = (2n+1)^2 / (4(n+1)^2)
    T(n,k+1)/T(n,k) = (2k+1)^2 / (4(k+1)^2)

Powers of two are applied to a term exactly once, at final rational
assembly, never compounded through running products.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Callable, List, Optional, Tuple

__all__ = [
    "WZPair",
    "WZReport",
    "PAIR_ONE",
    "PAIR_TWO",
    "binom",
    "wz_pair_verify",
    "identity_2_8_2_9",
    "telescope_reconstruct",
    "ramanujan_partial_sums",
]


@lru_cache(maxsize=None)
def binom(n: int, k: int) -> int:
    """C(n,k) by the multiplicative formula with running gcd reduction."""
    if k < 0 or n < 0 or k > n:
        raise ValueError(f"binom needs 0 <= k <= n, got n={n}, k={k}")
    k = min(k, n - k)
    num = 1
    den = 1
    for i in range(1, k + 1):
        num *= n - k + i
        den *= i
        g = gcd(num, den)
        num //= g
        den //= g
    return num // den


@dataclass(frozen=True)
class WZPair:
    """Certificate pair with the relation f(n+1,k)-f(n,k) = g(n,k+1)-g(n,k).

    reduced_f/reduced_g are f/T and g/T for the shared factor T above; when
    both are present the verifier uses them and never touches a binomial.
    """

    name: str
    f: Callable[[int, int], Fraction]
    g: Callable[[int, int], Fraction]
    reduced_f: Optional[Callable[[int, int], Fraction]] = None
    reduced_g: Optional[Callable[[int, int], Fraction]] = None


@dataclass(frozen=True)
class WZReport:
    """Violations are (n, k, exact residual); k is None for telescoping rows.
    An empty tuple is a proof for the range checked."""

    pair_name: str
    n_max: int
    relations_checked: int
    violations: Tuple[Tuple[int, Optional[int], Fraction], ...]
    route: str

    @property
    def ok(self) -> bool:
        return not self.violations


def _t_factor(n: int, k: int) -> Fraction:
    return Fraction(binom(2 * k, k) ** 2 * binom(2 * n, n) ** 2, 1 << (4 * k + 4 * n))


def _f_one(n: int, k: int) -> Fraction:
    return _t_factor(n, k) * Fraction((2 * n + 1) ** 2, 2 * n - 2 * k + 1)


def _g_one(n: int, k: int) -> Fraction:
    return _t_factor(n, k) * Fraction(
        -(k ** 2) * (2 * n + 1) ** 2, (1 + n) ** 2 * (2 * n - 2 * k + 3)
    )


def _f_two(n: int, k: int) -> Fraction:
    return _t_factor(n, k) * Fraction((2 * n + 1) ** 2, n + k + 1)


def _g_two(n: int, k: int) -> Fraction:
    return _t_factor(n, k) * Fraction(
        k ** 2 * (2 * n + 1) ** 2, (n + 1) ** 2 * (n + k + 1)
    )


PAIR_ONE = WZPair(
    name="pair-2n-2k+1",
    f=_f_one,
    g=_g_one,
    reduced_f=lambda n, k: Fraction((2 * n + 1) ** 2, 2 * n - 2 * k + 1),
    reduced_g=lambda n, k: Fraction(
        -(k ** 2) * (2 * n + 1) ** 2, (1 + n) ** 2 * (2 * n - 2 * k + 3)
    ),
)

PAIR_TWO = WZPair(
    name="pair-n+k+1",
    f=_f_two,
    g=_g_two,
    reduced_f=lambda n, k: Fraction((2 * n + 1) ** 2, n + k + 1),
    reduced_g=lambda n, k: Fraction(
        k ** 2 * (2 * n + 1) ** 2, (n + 1) ** 2 * (n + k + 1)
    ),
)


def wz_pair_verify(pair: WZPair, n_max: int) -> WZReport:
    """Check the pair relation exactly for all 0 <= k <= n <= n_max.

    Violations are reported with the exact residual of the full (unreduced)
    relation; they are data, not errors.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    violations: List[Tuple[int, Optional[int], Fraction]] = []
    checked = 0
    reduced = pair.reduced_f is not None and pair.reduced_g is not None
    for n in range(n_max + 1):
        if reduced:
            r_n = Fraction((2 * n + 1) ** 2, 4 * (n + 1) ** 2)
            for k in range(n + 1):
                lhs = pair.reduced_f(n + 1, k) * r_n - pair.reduced_f(n, k)
                r_k = Fraction((2 * k + 1) ** 2, 4 * (k + 1) ** 2)
                rhs = pair.reduced_g(n, k + 1) * r_k - pair.reduced_g(n, k)
                checked += 1
                if lhs != rhs:
                    violations.append((n, k, (lhs - rhs) * _t_factor(n, k)))
        else:
            for k in range(n + 1):
                lhs = pair.f(n + 1, k) - pair.f(n, k)
                rhs = pair.g(n, k + 1) - pair.g(n, k)
                checked += 1
                if lhs != rhs:
                    violations.append((n, k, lhs - rhs))
    return WZReport(
        pair_name=pair.name,
        n_max=n_max,
        relations_checked=checked,
        violations=tuple(violations),
        route="reduced" if reduced else "direct",
    )


@lru_cache(maxsize=None)
def _central_sq(k: int) -> int:
    return binom(2 * k, k) ** 2


def identity_2_8_2_9(n: int) -> Tuple[Fraction, Fraction, Fraction]:
    """The three exact sums that the certificate pairs prove equal:

    s1 = sum_{k<=n} 2^(-4k) C(2k,k)^2 / (2n-2k+1)
    s2 = sum_{k<=n} 2^(-4k) C(2k,k)^2 / (n+k+1)
    s3 = 2^(4n) / ((2n+1)^2 C(2n,n)^2) * sum_{k<=n} (4k+1) 2^(-8k) C(2k,k)^4
    """
    if n < 0:
        raise ValueError(f"n must be >= 0, got {n}")
    s1 = Fraction(0)
    s2 = Fraction(0)
    inner = Fraction(0)
    for k in range(n + 1):
        csq = _central_sq(k)
        s1 += Fraction(csq, (1 << (4 * k)) * (2 * n - 2 * k + 1))
        s2 += Fraction(csq, (1 << (4 * k)) * (n + k + 1))
        inner += Fraction((4 * k + 1) * csq * csq, 1 << (8 * k))
    s3 = Fraction(1 << (4 * n), (2 * n + 1) ** 2 * _central_sq(n)) * inner
    return s1, s2, s3


def telescope_reconstruct(pair: WZPair, n_max: int) -> WZReport:
    """Check h(n) = h(0) + sum_{j<=n} (f(j,j) + g(j-1,j) - g(j-1,0)) against
    the direct row sums h(n) = sum_{k<=n} f(n,k), exactly, for n <= n_max."""
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    violations: List[Tuple[int, Optional[int], Fraction]] = []
    recon = pair.f(0, 0)
    checked = 1  # n = 0 base case is h(0) = f(0,0) by construction
    for n in range(1, n_max + 1):
        recon += pair.f(n, n) + pair.g(n - 1, n) - pair.g(n - 1, 0)
        direct = sum((pair.f(n, k) for k in range(n + 1)), Fraction(0))
        checked += 1
        if direct != recon:
            violations.append((n, None, direct - recon))
    return WZReport(
        pair_name=pair.name,
        n_max=n_max,
        relations_checked=checked,
        violations=tuple(violations),
        route="telescope",
    )


def ramanujan_partial_sums(m_max: int) -> List[Fraction]:
    """Exact inner partial sums S_m = sum_{k<=m} (4k+1) 2^(-8k) C(2k,k)^4.

    These grow like (4/pi^2) log m + O(1); they feed the double-sum
    identities, whose numeric checks cross-validate against these exact
    values.
    """
    if m_max < 0:
        raise ValueError(f"m_max must be >= 0, got {m_max}")
    out: List[Fraction] = []
    acc = Fraction(0)
    c = 1  # C(2k,k) built by recurrence, powers of two applied at assembly
    for k in range(m_max + 1):
        if k > 0:
            c = c * 2 * (2 * k - 1) // k
        acc += Fraction((4 * k + 1) * c ** 4, 1 << (8 * k))
        out.append(acc)
    return out
