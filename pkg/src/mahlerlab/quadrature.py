"""Double-exponential quadrature on (0,1) and shifted rank-1 lattice QMC on
the torus.

tanh-sinh absorbs endpoint logarithmic singularities because the substituted
weight decays like exp(-c exp |t|) while log-type integrands grow only
linearly in t.  The torus rule exists for integrands of the form log|P| whose
singular set has measure zero; sampled exact zeros are discarded and counted
rather than clamped.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

import numpy as np
from mpmath import mp

from .precision import NoConvergence

__all__ = [
    "QuadratureResult",
    "TorusIntegrand",
    "IntegrandError",
    "tanh_sinh",
    "tanh_sinh_interval",
    "torus_qmc",
    "QMC_LATTICE_Z",
    "DEFAULT_QMC_SEED",
]


class IntegrandError(ArithmeticError):
    """Integrand produced NaN or +inf.  abscissa records where."""

    def __init__(self, message, abscissa=None):
        super().__init__(message)
        self.abscissa = abscissa


@dataclass(frozen=True)
class QuadratureResult:
    value: object
    error_estimate: object
    evaluations: int
    converged: bool
    levels: int = 0
    discarded_fraction: float = 0.0


@dataclass(frozen=True)
class TorusIntegrand:
    """Integrand on [0,1)^dimension.

    evaluate is the scalar ground truth.  evaluate_block, if provided, takes
    an (n, dimension) float64 array and returns n values; it must agree with
    evaluate pointwise and exists only to make 10^6-point runs affordable.
    """

    dimension: int
    evaluate: Callable
    singular_set_note: str = ""
    evaluate_block: Optional[Callable] = None

    def __post_init__(self):
        if not 1 <= self.dimension <= 4:
            raise ValueError(f"dimension must be 1..4, got {self.dimension}")

    def block(self, pts: np.ndarray) -> np.ndarray:
        if self.evaluate_block is not None:
            return np.asarray(self.evaluate_block(pts), dtype=np.float64)
        return np.array([float(self.evaluate(*row)) for row in pts], dtype=np.float64)


def _check_value(v, x):
    if isinstance(v, (complex, mp.mpc)):
        raise IntegrandError(f"integrand returned complex {v} at x = {mp.nstr(mp.mpf(x), 8)}", abscissa=x)
    if mp.isnan(v) or (mp.isinf(v) and v > 0):
        raise IntegrandError(f"integrand returned {v} at x = {mp.nstr(mp.mpf(x), 8)}", abscissa=x)
    return v


def tanh_sinh(f, tolerance, max_levels: int = 12, precision: Optional[int] = None):
    """Integrate f over (0,1), refining until two successive levels differ by
    less than tolerance (absolute).

    The substitution is x(t) = 1/(1 + exp(-pi sinh t)); the symmetric node
    x(-t) = 1 - x(t) is formed from the same exponential, so abscissae near 0
    carry full relative precision.
    """
    tol = mp.mpf(tolerance)
    if tol <= 0:
        raise ValueError("tolerance must be positive")
    work = max(int(-mp.log(tol, 2)) + 48, (precision or 0) + 16, 80)
    with mp.workprec(work):
        # stop where 1 - x(t) reaches ~2^(4-work): closer nodes would round
        # onto the endpoint itself, and their weight is already negligible
        t_max = mp.asinh((work - 4) * mp.log(2) / mp.pi)
        pi = mp.pi
        evals = 0

        def node_pair(t):
            nonlocal evals
            e = mp.exp(-pi * mp.sinh(t))
            d = 1 + e
            w = pi * mp.cosh(t) * e / (d * d)
            x_hi = 1 / d
            x_lo = e / d
            if w == 0 or x_hi >= 1 or x_lo <= 0:
                return mp.mpf(0)
            evals += 2
            return w * (_check_value(f(x_hi), x_hi) + _check_value(f(x_lo), x_lo))

        # level 0: unit step
        evals += 1
        total = (pi / 4) * _check_value(f(mp.mpf("0.5")), mp.mpf("0.5"))
        k = 1
        while k <= t_max:
            total += node_pair(mp.mpf(k))
            k += 1
        estimates = [total]  # still scaled by h = 1

        d1 = mp.inf
        d2 = mp.inf
        for level in range(1, max_levels + 1):
            h = mp.mpf(2) ** (-level)
            add = mp.mpf(0)
            k = 1
            while k * h <= t_max:
                add += node_pair(k * h)
                k += 2
            # previous estimate already carries its own step factor
            total = estimates[-1] / 2 + h * add
            estimates.append(total)
            if level >= 2:
                d2 = d1
                d1 = abs(estimates[-1] - estimates[-2])
                if d1 <= tol:
                    err = d1 if d2 == mp.inf or d2 == 0 else min(d1, d1 * d1 / d2)
                    err = max(err, abs(estimates[-1]) * mp.mpf(2) ** (8 - work))
                    err = min(err, d1)
                    with mp.workprec(max(precision or 0, work - 48) + 8):
                        return QuadratureResult(
                            value=+estimates[-1],
                            error_estimate=+err,
                            evaluations=evals,
                            converged=True,
                            levels=level,
                        )
        raise NoConvergence(
            f"tanh_sinh: level differences still {mp.nstr(d1, 5)} after {max_levels} levels",
            best=+estimates[-1],
            terms=evals,
        )


def tanh_sinh_interval(f, a, b, tolerance, max_levels: int = 12, precision: Optional[int] = None):
    """Integrate f over (a,b) by affine reduction to (0,1)."""
    work = max(int(-mp.log(mp.mpf(tolerance), 2)) + 48, (precision or 0) + 16, 80)
    with mp.workprec(work):
        aa = mp.mpf(a)
        width = mp.mpf(b) - aa
        if width <= 0:
            raise ValueError("need a < b")
    return tanh_sinh(
        lambda u: f(aa + width * u) * width,
        tolerance,
        max_levels=max_levels,
        precision=precision,
    )


# first four components of a published CBC generating vector for n = 2^20
# (Kuo's order-2 weighted lattice tables); components are odd, hence valid
# for every power-of-two point count
QMC_LATTICE_Z = (1, 182667, 469891, 498753)

DEFAULT_QMC_SEED = 0x5EED


def torus_qmc(
    f: TorusIntegrand,
    samples: int,
    shifts: int,
    seed: Union[int, Sequence[int]] = DEFAULT_QMC_SEED,
):
    """Shifted rank-1 lattice rule over [0,1)^d.

    Each shift gets the same lattice offset by an independent uniform vector;
    value is the median of the per-shift means and error-estimate their
    standard deviation scaled by 1/sqrt(shifts).  Points where the integrand
    is -inf (exact zeros of |P|) are discarded and the fraction reported.
    """
    if samples < 2 ** 10:
        raise ValueError(f"samples must be >= 2^10, got {samples}")
    if shifts < 8:
        raise ValueError(f"shifts must be >= 8, got {shifts}")
    d = f.dimension
    rng = np.random.default_rng(seed if not isinstance(seed, int) else [seed])
    z = np.array(QMC_LATTICE_Z[:d], dtype=np.int64)
    j = np.arange(samples, dtype=np.int64)
    base = (j[:, None] * z[None, :]) % samples

    means = []
    discarded = 0
    for _ in range(shifts):
        shift = rng.random(d)
        pts = (base / samples + shift) % 1.0
        vals = f.block(pts)
        bad = np.isnan(vals) | (np.isposinf(vals))
        if bad.any():
            where = pts[int(np.argmax(bad))]
            raise IntegrandError(
                f"integrand returned {vals[np.argmax(bad)]} at theta = {where}",
                abscissa=tuple(where),
            )
        keep = ~np.isneginf(vals)
        discarded += int(len(vals) - keep.sum())
        means.append(float(np.mean(vals[keep])))

    arr = np.array(means)
    value = float(np.median(arr))
    spread = float(np.std(arr, ddof=1)) / math.sqrt(shifts)
    with mp.workprec(64):
        return QuadratureResult(
            value=mp.mpf(value),
            error_estimate=mp.mpf(spread),
            evaluations=samples * shifts,
            converged=True,
            discarded_fraction=discarded / (samples * shifts),
        )
