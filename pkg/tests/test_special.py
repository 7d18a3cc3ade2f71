import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st
from mpmath import mp
import scipy.special

from mahlerlab.special import (
    PFQSpec,
    agm,
    catalan,
    ell_k,
    ell_kprime,
    exp_integral_e1,
    gamma_half_int,
    gamma_upper_int,
    legendre_chi3,
    pfq,
    zeta_int,
    zeta_prime_minus2,
)


class TestAgm:
    def test_equal_arguments_fixed_point(self):
        assert agm(1, 1, precision=128) == 1

    def test_gauss_constant(self):
        # M(1, sqrt(2)) = sqrt(2) M(1, 1/sqrt(2)) by homogeneity; the frozen
        # value is Gauss's 1.19814023473559220744...
        with mp.workprec(160):
            v = agm(1, mp.sqrt(2), precision=160)
            ref = mp.mpf("1.1981402347355922074399224922803238782272126632156515582636749529")
            assert abs(v - ref) < mp.mpf(2) ** -150

    def test_homogeneity_against_direct(self):
        with mp.workprec(128):
            a, b = mp.mpf("0.37"), mp.mpf("2.91")
            lam = mp.mpf("5.25")
            lhs = agm(lam * a, lam * b, precision=128)
            rhs = lam * agm(a, b, precision=128)
            assert abs(lhs - rhs) < mp.mpf(2) ** -120

    @given(st.floats(min_value=1e-3, max_value=1e3),
           st.floats(min_value=1e-3, max_value=1e3))
    @settings(max_examples=40, deadline=None)
    def test_mean_inequality(self, a, b):
        with mp.workprec(96):
            v = agm(a, b, precision=96)
            assert min(a, b) * (1 - 1e-20) <= v <= max(a, b) * (1 + 1e-20)

    def test_nonpositive_rejected(self):
        with pytest.raises(ValueError):
            agm(0, 1)
        with pytest.raises(ValueError):
            agm(1, -2)

    def test_tiny_argument(self):
        # agm(1, 2^-40) ~ pi / (2 log(4 * 2^40)), still well conditioned
        with mp.workprec(128):
            v = agm(1, mp.mpf(2) ** -40, precision=128)
            assert 0 < v < 1


class TestEllipticK:
    def test_k_zero(self):
        with mp.workprec(128):
            assert abs(ell_k(0, 128) - mp.pi / 2) < mp.mpf(2) ** -120

    def test_kprime_one(self):
        with mp.workprec(128):
            assert abs(ell_kprime(1, 128) - mp.pi / 2) < mp.mpf(2) ** -120

    def test_lemniscatic_value_vs_gamma(self):
        # K(1/sqrt(2)) = Gamma(1/4)^2 / (4 sqrt(pi)); the gamma route is a
        # fully independent evaluation
        with mp.workprec(192):
            v = ell_k(1 / mp.sqrt(2), 192)
            ref = mp.gamma(mp.mpf(1) / 4) ** 2 / (4 * mp.sqrt(mp.pi))
            assert abs(v - ref) < mp.mpf(2) ** -180

    def test_scipy_grid(self):
        # scipy.special.ellipk takes m = k^2
        for i in range(1, 20):
            k = i / 20.0
            with mp.workprec(80):
                v = ell_k(k, 80)
            assert abs(float(v) - scipy.special.ellipk(k * k)) < 1e-12

    def test_kprime_is_k_of_complement(self):
        with mp.workprec(128):
            k = mp.mpf("0.3")
            kc = mp.sqrt(1 - k * k)
            assert abs(ell_kprime(k, 128) - ell_k(kc, 128)) < mp.mpf(2) ** -118

    @given(st.floats(min_value=0.01, max_value=0.99))
    @settings(max_examples=30, deadline=None)
    def test_landen_descending(self, kf):
        # K((1-k)/(1+k)) = (1+k)/2 * K'(k)
        with mp.workprec(128):
            k = mp.mpf(kf)
            lhs = ell_k((1 - k) / (1 + k), 128)
            rhs = (1 + k) / 2 * ell_kprime(k, 128)
            assert abs(lhs - rhs) < mp.mpf(10) ** -25

    def test_domains(self):
        with pytest.raises(ValueError):
            ell_k(1)
        with pytest.raises(ValueError):
            ell_k(-0.1)
        with pytest.raises(ValueError):
            ell_kprime(0)
        with pytest.raises(ValueError):
            ell_kprime(1.5)


class TestGammaHalfInt:
    def test_base_cases(self):
        with mp.workprec(128):
            assert gamma_half_int(2, 128) == 1
            assert abs(gamma_half_int(1, 128) - mp.sqrt(mp.pi)) < mp.mpf(2) ** -120

    def test_integers_are_factorials(self):
        for n in range(1, 9):
            assert gamma_half_int(2 * n, 128) == math.factorial(n - 1)

    def test_seven_halves(self):
        with mp.workprec(128):
            ref = mp.mpf(15) / 8 * mp.sqrt(mp.pi)
            assert abs(gamma_half_int(7, 128) - ref) < mp.mpf(2) ** -118

    @given(st.integers(min_value=1, max_value=20))
    @settings(max_examples=20, deadline=None)
    def test_recurrence(self, t):
        # Gamma(s + 1) = s Gamma(s) with s = t/2
        with mp.workprec(128):
            lhs = gamma_half_int(t + 2, 128)
            rhs = mp.mpf(t) / 2 * gamma_half_int(t, 128)
            assert abs(lhs - rhs) <= abs(lhs) * mp.mpf(2) ** -118

    def test_domain(self):
        with pytest.raises(ValueError):
            gamma_half_int(0)


def _zeta3_raw_oracle() -> float:
    # plain float64 sum with the leading Euler-Maclaurin tail corrections;
    # good to ~1e-13, independent of the working-precision machinery
    n_cut = 200_000
    s = 0.0
    for n in range(n_cut - 1, 0, -1):
        s += 1.0 / (n * n * n)
    s += 1.0 / (2.0 * n_cut ** 2) + 1.0 / (2.0 * n_cut ** 3)
    return s


class TestZetaInt:
    def test_even_closed_forms(self):
        with mp.workprec(192):
            pi = mp.pi
            assert abs(zeta_int(2, 160) - pi ** 2 / 6) < mp.mpf(2) ** -150
            assert abs(zeta_int(4, 160) - pi ** 4 / 90) < mp.mpf(2) ** -150
            ref12 = mp.mpf(691) / 638512875 * pi ** 12
            assert abs(zeta_int(12, 160) - ref12) < mp.mpf(2) ** -150

    def test_zeta3_against_raw_sum(self):
        v = float(zeta_int(3, 96))
        assert abs(v - _zeta3_raw_oracle()) < 1e-12

    def test_zeta3_against_scipy(self):
        assert abs(float(zeta_int(3, 96)) - scipy.special.zeta(3)) < 1e-14

    def test_precision_scaling(self):
        with mp.workprec(300):
            lo = zeta_int(3, 128)
            hi = zeta_int(3, 288)
            assert abs(lo - hi) < mp.mpf(2) ** -120

    def test_reproducible_bits(self):
        a = zeta_int(5, 160)
        b = zeta_int(5, 160)
        assert mp.mpf(a) == mp.mpf(b)

    def test_domain(self):
        with pytest.raises(ValueError):
            zeta_int(1)
        with pytest.raises(ValueError):
            zeta_int(0)


class TestZetaPrimeMinusTwo:
    def test_closed_form(self):
        with mp.workprec(160):
            ref = -zeta_int(3, 160) / (4 * mp.pi ** 2)
            assert abs(zeta_prime_minus2(140) - ref) < mp.mpf(2) ** -130

    def test_sign_and_size(self):
        v = zeta_prime_minus2(64)
        assert -0.031 < float(v) < -0.030


def _catalan_euler_transform_oracle() -> float:
    # Euler transform of sum (-1)^n a_n, a_n = 1/(2n+1)^2: forward differences
    # at n = 0 give G = sum_k Delta^k a_0 / 2^(k+1)
    n = 40
    a = [1.0 / (2 * j + 1) ** 2 for j in range(n)]
    total = 0.0
    for k in range(n):
        total += a[0] / 2.0 ** (k + 1)
        a = [a[j] - a[j + 1] for j in range(len(a) - 1)]
    return total


class TestCatalan:
    def test_against_euler_transform(self):
        assert abs(float(catalan(96)) - _catalan_euler_transform_oracle()) < 1e-10

    def test_frozen_value(self):
        with mp.workprec(200):
            ref = mp.mpf("0.91596559417721901505460351493238411077414937428167"
                         "21342664981196217630197762547694794")
            assert abs(catalan(192) - ref) < mp.mpf(2) ** -185

    def test_precision_scaling(self):
        with mp.workprec(300):
            assert abs(catalan(128) - catalan(256)) < mp.mpf(2) ** -120


class TestLegendreChi3:
    def test_endpoints(self):
        with mp.workprec(128):
            assert legendre_chi3(0, 128) == 0
            ref = 7 * zeta_int(3, 128) / 8
            assert abs(legendre_chi3(1, 128) - ref) < mp.mpf(2) ** -118

    def test_against_polylog_split(self):
        # chi_3(a) = (Li_3(a) - Li_3(-a)) / 2, both sides by raw summation
        a = 0.7
        li_pos = sum(a ** n / n ** 3 for n in range(1, 400))
        li_neg = sum((-a) ** n / n ** 3 for n in range(1, 400))
        ref = (li_pos - li_neg) / 2
        assert abs(float(legendre_chi3(0.7, 96)) - ref) < 1e-13

    def test_near_one_continuity(self):
        # chi_3 is continuous at 1; a point within 2^-70 of 1 must land
        # within ~1e-20 of the closed form
        with mp.workprec(160):
            a = 1 - mp.mpf(2) ** -70
            ref = 7 * zeta_int(3, 160) / 8
            assert abs(legendre_chi3(a, 128) - ref) < mp.mpf(10) ** -20

    def test_domain(self):
        with pytest.raises(ValueError):
            legendre_chi3(-0.1)
        with pytest.raises(ValueError):
            legendre_chi3(1.1)


class TestPFQSpec:
    def test_self_check_gauss(self):
        spec = PFQSpec([Fraction(1, 2), Fraction(1, 2)], [Fraction(1)], 1)
        assert spec.self_check()

    def test_self_check_deep(self):
        spec = PFQSpec([Fraction(3, 2)] * 4 + [Fraction(1)] * 2, [Fraction(2)] * 5, 1)
        assert spec.self_check()
        assert spec.tail_exponent() == 3

    def test_wan_moment_exponent(self):
        # 4F3(1/2,1/2,(m+1)/2,(m+1)/2; 1,(m+2)/2,(m+2)/2; 1) decays like n^-2
        m = 3
        spec = PFQSpec(
            [Fraction(1, 2), Fraction(1, 2), Fraction(m + 1, 2), Fraction(m + 1, 2)],
            [Fraction(1), Fraction(m + 2, 2), Fraction(m + 2, 2)],
            1,
        )
        assert spec.tail_exponent() == 2

    def test_bad_lower_parameter(self):
        with pytest.raises(ValueError):
            PFQSpec([Fraction(1, 2)], [Fraction(-2)], 1)
        with pytest.raises(ValueError):
            PFQSpec([Fraction(1, 2)], [Fraction(0)], 1)


class TestPfq:
    def test_gauss_vs_agm_on_grid(self):
        # 2F1(1/2,1/2;1;k^2) = 2 K(k) / pi, with K from the AGM: two routes
        # that share no code
        import random

        rng = random.Random(20260816)
        with mp.workprec(160):
            for _ in range(20):
                kf = rng.uniform(0.05, 0.9)
                k = mp.mpf(repr(kf))
                spec = PFQSpec([Fraction(1, 2), Fraction(1, 2)], [Fraction(1)], k * k)
                lhs = pfq(spec, mp.mpf(10) ** -30, precision=160)
                rhs = 2 * ell_k(k, 160) / mp.pi
                assert abs(lhs - rhs) < mp.mpf(10) ** -20

    def test_unit_argument_watson(self):
        # 3F2(1/2,1/2,1/2; 1,1; 1) = pi / Gamma(3/4)^4; the n^-1.5 tail is the
        # hardest decay rate the Levin path is asked to handle
        spec = PFQSpec([Fraction(1, 2)] * 3, [Fraction(1)] * 2, 1)
        with mp.workprec(160):
            v = pfq(spec, mp.mpf(10) ** -15)
            ref = mp.pi / mp.gamma(mp.mpf(3) / 4) ** 4
            assert abs(v - ref) < mp.mpf(10) ** -14

    def test_unit_argument_six_five(self):
        # tail decays like n^-3: Levin must reach 1e-25 from ~320 terms
        spec = PFQSpec([Fraction(3, 2)] * 4 + [Fraction(1)] * 2, [Fraction(2)] * 5, 1)
        with mp.workprec(200):
            v = pfq(spec, mp.mpf(10) ** -25)
            w = pfq(spec, mp.mpf(10) ** -30)
            assert abs(v - w) < mp.mpf(10) ** -24

    def test_terminating_series_exact(self):
        # 2F1(-3, 1/2; 2; x) is a cubic; compare against the explicit sum
        x = Fraction(7, 5)
        spec = PFQSpec([Fraction(-3), Fraction(1, 2)], [Fraction(2)], x)
        t = Fraction(1)
        ref = Fraction(0)
        for n in range(4):
            ref += t
            t *= (Fraction(-3) + n) * (Fraction(1, 2) + n) * x
            t /= (Fraction(2) + n) * (n + 1)
        with mp.workprec(96):
            v = pfq(spec, mp.mpf(10) ** -20)
            assert abs(v - mp.mpf(ref.numerator) / ref.denominator) < mp.mpf(10) ** -18

    def test_divergent_rejected(self):
        spec = PFQSpec([Fraction(1, 2), Fraction(1, 2)], [Fraction(1)], 1.5)
        with pytest.raises(ValueError):
            pfq(spec, 1e-10)

    def test_unit_argument_without_excess_rejected(self):
        # 2F1(1/2,1/2;1;1) is the divergent K(1) limit
        spec = PFQSpec([Fraction(1, 2), Fraction(1, 2)], [Fraction(1)], 1)
        with pytest.raises(ValueError):
            pfq(spec, 1e-10)


class TestExpIntegral:
    def test_scipy_grid(self):
        for x in (0.1, 0.5, 1.0, 2.0, 3.9, 4.1, 6.0, 15.0, 40.0):
            with mp.workprec(80):
                v = float(exp_integral_e1(x, 80))
            assert abs(v - scipy.special.exp1(x)) <= 1e-13 * max(1.0, scipy.special.exp1(x))

    def test_high_precision_vs_mpmath(self):
        with mp.workprec(200):
            for x in ("0.25", "1", "3.5", "4", "9"):
                xx = mp.mpf(x)
                assert abs(exp_integral_e1(xx, 192) - mp.e1(xx)) < mp.mpf(2) ** -185

    def test_crossover_consistency(self):
        # series route just below 4, continued fraction just above: both must
        # agree to the derivative-gap level
        with mp.workprec(160):
            h = mp.mpf(2) ** -60
            lo = exp_integral_e1(4 - h, 160)
            hi = exp_integral_e1(4 + h, 160)
            assert abs(lo - hi) < mp.mpf(10) ** -17

    def test_domain(self):
        with pytest.raises(ValueError):
            exp_integral_e1(0)
        with pytest.raises(ValueError):
            exp_integral_e1(-1)


class TestGammaUpperInt:
    def test_s_zero_is_e1(self):
        with mp.workprec(128):
            x = mp.mpf("2.3")
            assert gamma_upper_int(0, x, 128) == exp_integral_e1(x, 128)

    def test_elementary_forms(self):
        # Gamma(4, x) = e^-x (x^3 + 3x^2 + 6x + 6), Gamma(3, x) = e^-x (x^2 + 2x + 2)
        with mp.workprec(160):
            x = mp.mpf("1.7")
            g4 = mp.exp(-x) * (x ** 3 + 3 * x ** 2 + 6 * x + 6)
            g3 = mp.exp(-x) * (x ** 2 + 2 * x + 2)
            assert abs(gamma_upper_int(4, x, 160) - g4) < mp.mpf(2) ** -150
            assert abs(gamma_upper_int(3, x, 160) - g3) < mp.mpf(2) ** -150

    @given(st.integers(min_value=1, max_value=8),
           st.floats(min_value=0.05, max_value=20.0))
    @settings(max_examples=40, deadline=None)
    def test_recurrence(self, s, xf):
        # Gamma(s+1, x) = s Gamma(s, x) + x^s e^-x
        with mp.workprec(128):
            x = mp.mpf(repr(xf))
            lhs = gamma_upper_int(s + 1, x, 128)
            rhs = s * gamma_upper_int(s, x, 128) + x ** s * mp.exp(-x)
            assert abs(lhs - rhs) <= abs(lhs) * mp.mpf(2) ** -110

    def test_small_x_limit(self):
        with mp.workprec(128):
            v = gamma_upper_int(4, mp.mpf(10) ** -30, 128)
            assert abs(v - 6) < mp.mpf(10) ** -28

    def test_domain(self):
        with pytest.raises(ValueError):
            gamma_upper_int(-1, 1.0)
