"""Finite-field arithmetic behind the point-count identity for the affine
hypersurface

    H_t : (x^2+1)(y^2+1)(z^2+1)(w^2+1) - 16 t xyzw = 0   over F_p,

whose count equals

    p^3 4F3(t^2) + 4 phi(-1) p^2 2F1(t^2) - 3 eps(t^2-1) p^2
      + p^3 + 8(phi(-1)+1) p^2 - 16(phi(-1)+1) p - 3p - 8(phi(-1)+1) + 1

with phi the Legendre symbol, eps the trivial character (value 0 at 0),
and nFn the finite-field hypergeometric sums with all upper parameters phi
and all lower parameters eps.

The hypergeometric values use the character-sum definition

    (n+1)Fn(x) = p/(p-1) * sum over chi of binom(phi chi, chi)^(n+1) chi(x),
    binom(A, B) = B(-1)/p * J(A, conj(B)),   J(A, B) = sum A(u) B(1-u),

evaluated in complex double arithmetic and rounded to a rational with
denominator p^n under an integrality assertion, so a normalization slip
cannot pass silently.  verify_4_1 closes the loop against brute-force
counting.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple

import numpy as np

from .precision import ResourceLimitError

__all__ = [
    "CharTable",
    "PointCount",
    "Eq41Report",
    "legendre",
    "count_points",
    "count_points_exhaustive",
    "greene_nfn",
    "verify_4_1",
]

_COUNT_P_MAX = 199
_EXHAUSTIVE_P_MAX = 13
_VERIFY_P_MAX = 50


def _check_odd_prime(p: int) -> None:
    if not isinstance(p, int) or p < 3 or p % 2 == 0:
        raise ValueError(f"p must be an odd prime, got {p}")
    if p < 10 ** 6:
        d = 3
        while d * d <= p:
            if p % d == 0:
                raise ValueError(f"p must be prime; {p} = {d} * {p // d}")
            d += 2


def legendre(a: int, p: int) -> int:
    """Quadratic residue symbol (a/p) in {-1, 0, 1} by Euler's criterion."""
    _check_odd_prime(p)
    r = pow(a % p, (p - 1) // 2, p)
    return -1 if r == p - 1 else r


def _primitive_root(p: int) -> int:
    factors = set()
    m = p - 1
    d = 2
    while d * d <= m:
        while m % d == 0:
            factors.add(d)
            m //= d
        d += 1
    if m > 1:
        factors.add(m)
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ArithmeticError(f"no primitive root found for {p}")


@dataclass(frozen=True)
class CharTable:
    """Multiplicative characters of F_p* indexed by j = 0..p-2 against a
    fixed primitive root g: chi_j(g^a) = omega^(j a), omega = exp(2 pi i/(p-1)).
    All characters take the value 0 at 0."""

    prime: int
    generator: int
    index: Tuple[int, ...]  # discrete log base g; entry 0 is unused

    @classmethod
    @functools.lru_cache(maxsize=64)
    def build(cls, p: int) -> "CharTable":
        _check_odd_prime(p)
        g = _primitive_root(p)
        ind = [0] * p
        v = 1
        for a in range(p - 1):
            ind[v] = a
            v = v * g % p
        return cls(prime=p, generator=g, index=tuple(ind))

    @property
    def legendre_index(self) -> int:
        return (self.prime - 1) // 2

    def chi(self, j: int, x: int) -> complex:
        p = self.prime
        x %= p
        if x == 0:
            return 0j
        return np.exp(2j * np.pi * ((j * self.index[x]) % (p - 1)) / (p - 1))

    def chi_row(self, j: int) -> np.ndarray:
        """chi_j over x = 0..p-1 as complex128 (0 at x = 0)."""
        p = self.prime
        ind = np.asarray(self.index, dtype=np.int64)
        row = np.exp(2j * np.pi * ((j * ind) % (p - 1)) / (p - 1))
        row[0] = 0
        return row


@dataclass(frozen=True)
class PointCount:
    prime: int
    parameter: int
    count: int

    def __post_init__(self):
        if not 0 <= self.count <= self.prime ** 4:
            raise ValueError("count out of range for F_p^4")


def _legendre_table(p: int) -> np.ndarray:
    leg = np.zeros(p, dtype=np.int64)
    for x in range(1, p):
        leg[x] = -1
    for x in range(1, p):
        leg[x * x % p] = 1
    return leg


def count_points(p: int, t: int) -> PointCount:
    """Exact number of affine points on H_t over F_p by an O(p^3) sweep:
    for each (x, y, z) the equation is a quadratic in w, counted through
    the discriminant's Legendre symbol."""
    _check_odd_prime(p)
    if p > _COUNT_P_MAX:
        raise ResourceLimitError(f"count_points limited to p <= {_COUNT_P_MAX}")
    t %= p
    sq1 = (np.arange(p, dtype=np.int64) ** 2 + 1) % p
    leg = _legendre_table(p)
    idx = np.arange(p, dtype=np.int64)
    yz_sq = (sq1[:, None] * sq1[None, :]) % p          # (y^2+1)(z^2+1)
    yz = (idx[:, None] * idx[None, :]) % p             # y z
    total = 0
    for x in range(p):
        a = (int(sq1[x]) * yz_sq) % p                  # full cubic coefficient A
        b = (16 * t * x * yz) % p                      # linear coefficient B
        deg = a == 0
        # A = 0: A(w^2+1) = B w reduces to B w = 0
        total += int(np.count_nonzero(deg & (b == 0))) * p
        total += int(np.count_nonzero(deg & (b != 0)))
        disc = (b * b - 4 * a * a) % p
        total += int(np.sum((1 + leg[disc])[~deg]))
    return PointCount(prime=p, parameter=t, count=total)


def count_points_exhaustive(p: int, t: int) -> PointCount:
    """Independent O(p^4) brute-force count, kept as an oracle for small p."""
    _check_odd_prime(p)
    if p > _EXHAUSTIVE_P_MAX:
        raise ResourceLimitError(
            f"count_points_exhaustive limited to p <= {_EXHAUSTIVE_P_MAX}"
        )
    t %= p
    sq1 = [(x * x + 1) % p for x in range(p)]
    total = 0
    for x in range(p):
        for y in range(p):
            for z in range(p):
                lhs3 = sq1[x] * sq1[y] * sq1[z]
                rhs3 = 16 * t * x * y * z
                for w in range(p):
                    if (lhs3 * sq1[w] - rhs3 * w) % p == 0:
                        total += 1
    return PointCount(prime=p, parameter=t, count=total)


@functools.lru_cache(maxsize=64)
def _greene_binomials(p: int) -> np.ndarray:
    """binom(phi chi_j, chi_j) for j = 0..p-2 via Jacobi sums."""
    table = CharTable.build(p)
    q = table.legendre_index
    ind = np.asarray(table.index, dtype=np.int64)
    m = p - 1
    u = np.arange(2, p, dtype=np.int64)        # u != 0 and 1-u != 0
    ind_u = ind[u]
    ind_1mu = ind[(1 - u) % p]
    out = np.empty(m, dtype=np.complex128)
    omega = np.exp(2j * np.pi * np.arange(m) / m)
    for j in range(m):
        # J(phi chi_j, conj(chi_j)) with conj(chi_j) = chi_{m-j}
        e = ((q + j) * ind_u + (m - j) % m * ind_1mu) % m
        jac = omega[e].sum()
        chi_j_m1 = omega[(j * ind[p - 1]) % m]  # chi_j(-1)
        out[j] = chi_j_m1 / p * jac
    return out


def greene_nfn(p: int, n: int, x: int) -> Fraction:
    """Normalized finite-field (n+1)Fn (all upper phi, all lower eps) at x,
    as an exact rational with denominator p^n."""
    _check_odd_prime(p)
    if n not in (1, 3):
        raise ValueError(f"n must be 1 or 3, got {n}")
    x %= p
    if x == 0:
        return Fraction(0)
    table = CharTable.build(p)
    binoms = _greene_binomials(p)
    m = p - 1
    ind = table.index
    omega = np.exp(2j * np.pi * np.arange(m) / m)
    chi_x = omega[(np.arange(m) * ind[x]) % m]
    total = p / m * np.sum(binoms ** (n + 1) * chi_x)
    scaled = total * p ** n
    nearest = round(scaled.real)
    resid = abs(scaled - nearest)
    if resid > 1e-6:
        raise ArithmeticError(
            f"character sum for {n + 1}F{n}({x}) mod {p} is {resid:.3g} from "
            "an integer multiple of p^-n; normalization broken"
        )
    return Fraction(nearest, p ** n)


@dataclass(frozen=True)
class Eq41Report:
    """Per-t residuals of the point-count identity (count minus the
    hypergeometric right side); all must vanish."""

    prime: int
    residuals: Tuple[Tuple[int, int], ...]

    @property
    def ok(self) -> bool:
        return all(r == 0 for _, r in self.residuals)

    @property
    def max_abs_residual(self) -> int:
        return max(abs(r) for _, r in self.residuals)


def verify_4_1(p: int, constant_shift: int = 0) -> Eq41Report:
    """Check the count identity for every t in F_p*.

    constant_shift perturbs the identity's constant term and exists as a
    negative control: a nonzero shift must show up in every residual.
    """
    _check_odd_prime(p)
    if p > _VERIFY_P_MAX:
        raise ResourceLimitError(f"verify_4_1 limited to p <= {_VERIFY_P_MAX}")
    phi_m1 = legendre(-1, p)
    rows = []
    for t in range(1, p):
        t2 = t * t % p
        eps = 0 if (t2 - 1) % p == 0 else 1
        rhs = (
            p ** 3 * greene_nfn(p, 3, t2)
            + 4 * phi_m1 * p ** 2 * greene_nfn(p, 1, t2)
            - 3 * eps * p ** 2
            + p ** 3
            + 8 * (phi_m1 + 1) * p ** 2
            - 16 * (phi_m1 + 1) * p
            - 3 * p
            - 8 * (phi_m1 + 1)
            + 1
            + constant_shift
        )
        if rhs.denominator != 1:
            raise ArithmeticError(f"right side not an integer at t = {t}")
        rows.append((t, count_points(p, t).count - int(rhs)))
    return Eq41Report(prime=p, residuals=tuple(rows))
