import math
from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from partition_lab.specials import (
    SpecialFunctionError,
    bessel_i0,
    bessel_i1,
    d_dt_bessel_sqrt,
    gamma_pos,
    i0_leading_asymptotic,
    power_symbol_series,
    wright_psi,
    wright_series,
    zeta_trunc,
)

PREC = 160


def direct_psi(u, v, z, prec=220):
    """Per-term oracle: mpmath gamma for every term, no recurrences."""
    u = Fraction(u)
    v = Fraction(v)
    with mpmath.workprec(prec):
        z = mpf(z)
        total = mpf(0)
        n = 0
        while True:
            arg = mpf(u.numerator) / u.denominator * n + mpf(v.numerator) / v.denominator + 1
            term = z**n / (mpmath.factorial(n) * mpmath.gamma(arg))
            total += term
            if n > 8 and term < total * mpf(2) ** (-prec - 4):
                return +total
            n += 1


class TestZeta:
    def test_single_term(self):
        assert zeta_trunc(1, 2, PREC) == 1

    def test_two_terms(self):
        assert zeta_trunc(2, 2, PREC) == mpf(1.25)

    def test_thousand_terms_vs_higher_precision(self):
        lo = zeta_trunc(1000, 2, PREC)
        hi = zeta_trunc(1000, 2, 320)
        assert abs(lo - hi) / hi < mpf(2) ** (-(PREC - 12))
        assert mpmath.nstr(hi, 11) == "1.6439345667"

    def test_rational_exponent(self):
        got = zeta_trunc(100, Fraction(3, 2), PREC)
        with mpmath.workprec(320):
            ref = sum(mpf(1) / mpf(k) ** mpf(1.5) for k in range(1, 101))
        assert abs(got - ref) / ref < mpf(2) ** (-(PREC - 12))

    def test_domain(self):
        with pytest.raises(SpecialFunctionError):
            zeta_trunc(0, 2)
        with pytest.raises(SpecialFunctionError):
            zeta_trunc(5, 0)


class TestGamma:
    def test_one(self):
        assert gamma_pos(1, PREC) == 1

    def test_five(self):
        assert gamma_pos(5, PREC) == 24

    def test_three_halves(self):
        got = gamma_pos(Fraction(3, 2), PREC)
        with mpmath.workprec(320):
            ref = mpmath.sqrt(mpmath.pi) / 2
        assert abs(got - ref) / ref < mpf(2) ** (-(PREC - 8))
        assert mpmath.nstr(got, 11) == "0.88622692545"

    def test_nonpositive_rejected(self):
        with pytest.raises(SpecialFunctionError):
            gamma_pos(0, PREC)
        with pytest.raises(SpecialFunctionError):
            gamma_pos(Fraction(-3, 2), PREC)


class TestWrightSeries:
    @pytest.mark.parametrize("u,v", [(1, 0), (2, 1), (Fraction(1, 2), 0), (Fraction(1, 3), 2)])
    def test_at_zero(self, u, v):
        got = wright_series(u, v, 0, PREC).value
        ref = 1 / gamma_pos(Fraction(v) + 1, PREC + 20)
        assert abs(got - ref) <= ref * mpf(2) ** (-(PREC - 8))

    def test_u1_v0_z1_is_bessel_value(self):
        # sum 1/(n!)^2 = I0(2)
        got = wright_series(1, 0, 1, PREC).value
        with mpmath.workprec(320):
            ref = mpmath.nsum(lambda n: 1 / mpmath.factorial(n) ** 2, [0, mpmath.inf])
        assert abs(got - ref) / ref < mpf(2) ** (-(PREC - 10))
        assert mpmath.nstr(got, 11) == "2.2795853023"

    def test_u2_z10_vs_direct_summation(self):
        got = wright_series(2, 0, 10, 200).value
        ref = direct_psi(2, 0, 10, prec=260)
        assert abs(got - ref) / ref < mpf(10) ** (-20)

    @pytest.mark.parametrize(
        "u,v,z",
        [
            (Fraction(1, 2), 0, 17.5),
            (Fraction(1, 3), 1, 4.25),
            (Fraction(2, 3), 0, 31.0),
            (2, 0, 1000.0),
            (1, 1, 250.0),
            (Fraction(3, 2), Fraction(1, 2), 12.0),
        ],
    )
    def test_interleaved_recurrence_vs_per_term_gamma(self, u, v, z):
        got = wright_series(u, v, mpf(z), PREC).value
        ref = direct_psi(u, v, z)
        assert abs(got - ref) / ref < mpf(2) ** (-(PREC - 16))

    def test_against_independent_float_implementation(self):
        sc = pytest.importorskip("scipy.special")
        for (u, v, z) in [(0.5, 0.0, 3.0), (1.0, 1.0, 7.0), (2.0, 0.0, 40.0), (1 / 3, 2.0, 5.0)]:
            got = float(wright_series(Fraction(u).limit_denominator(9), Fraction(v), mpf(z), 80).value)
            ref = sc.wright_bessel(u, v + 1, z)
            assert got == pytest.approx(ref, rel=1e-11)

    def test_growth_bound(self):
        # log psi(u, 0; t) - 3 t^(1/(u+1)) stays bounded above on a log grid
        for u in (Fraction(1, 3), Fraction(1, 2), 1, 2):
            worst = -1e9
            for t in [1, 10, 100, 1000, 10000]:
                val = wright_series(u, 0, t, 96).value
                excess = float(mpmath.log(val)) - 3.0 * t ** (1.0 / (float(u) + 1.0))
                worst = max(worst, excess)
            assert worst < 1.0

    def test_negative_argument_rejected(self):
        with pytest.raises(SpecialFunctionError):
            wright_series(1, 0, mpf(-1), PREC)

    def test_deterministic(self):
        a = wright_psi(Fraction(1, 2), 1, mpf("17.3"), tol=1e-30)
        b = wright_psi(Fraction(1, 2), 1, mpf("17.3"), tol=1e-30)
        assert a == b


class TestBessel:
    def test_i0_zero(self):
        assert bessel_i0(0, PREC) == 1

    def test_i1_zero(self):
        assert bessel_i1(0, PREC) == 0

    def test_i0_two(self):
        got = bessel_i0(2, PREC)
        assert mpmath.nstr(got, 11) == "2.2795853023"

    def test_i1_two(self):
        got = bessel_i1(2, PREC)
        with mpmath.workprec(320):
            ref = mpmath.nsum(
                lambda n: 1 / (mpmath.factorial(n) * mpmath.factorial(n + 1)),
                [0, mpmath.inf],
            )
        assert abs(got - ref) / ref < mpf(2) ** (-(PREC - 10))
        assert mpmath.nstr(got, 11) == "1.5906368546"

    def test_i1_positive_at_small_x(self):
        assert bessel_i1(mpf("0.001"), PREC) > 0

    def test_composition_identity(self):
        z1 = zeta_trunc(1, 2, PREC)  # = 1
        assert bessel_i0(2 * mpmath.sqrt(z1 * 1), PREC) == bessel_i0(2, PREC)

    @pytest.mark.parametrize("x", [0.5, 2, 9.25, 33, 71, 100])
    def test_against_250bit_direct_oracles(self, x):
        with mpmath.workprec(280):
            xv = mpf(x)
            i0_ref = mpmath.nsum(
                lambda n: (xv / 2) ** (2 * n) / mpmath.factorial(n) ** 2,
                [0, mpmath.inf],
            )
            i1_ref = mpmath.nsum(
                lambda n: (xv / 2) ** (2 * n + 1)
                / (mpmath.factorial(n) * mpmath.factorial(n + 1)),
                [0, mpmath.inf],
            )
        assert abs(bessel_i0(mpf(x), PREC) - i0_ref) / i0_ref < mpf(10) ** (-25)
        assert abs(bessel_i1(mpf(x), PREC) - i1_ref) / i1_ref < mpf(10) ** (-25)

    def test_matches_mpmath_besseli(self):
        for x in (1, 7, 42):
            got = bessel_i0(x, PREC)
            with mpmath.workprec(PREC):
                ref = mpmath.besseli(0, x)
            assert abs(got - ref) / ref < mpf(2) ** (-(PREC - 16))

    def test_negative_rejected(self):
        with pytest.raises(SpecialFunctionError):
            bessel_i0(-1, PREC)
        with pytest.raises(SpecialFunctionError):
            bessel_i1(-1, PREC)


class TestDerivativeOfI0:
    def test_at_one_one(self):
        got = d_dt_bessel_sqrt(1, 1, PREC)
        assert abs(got - bessel_i1(2, PREC)) < bessel_i1(2, PREC) * mpf(2) ** (-(PREC - 16))

    def test_small_a_leading_term(self):
        a = mpf("1e-9")
        got = d_dt_bessel_sqrt(a, 2, PREC)
        assert abs(got - a) < a * mpf("1e-8")

    @pytest.mark.parametrize("a,t", [(0.1, 0.5), (1, 1), (3, 50), (0.7, 7.0)])
    def test_finite_difference(self, a, t):
        got = float(d_dt_bessel_sqrt(mpf(a), mpf(t), PREC))
        with mpmath.workprec(240):
            eps = mpf(t) * mpf("1e-12")
            hi = bessel_i0(2 * mpmath.sqrt(mpf(a) * (t + eps)), 220)
            lo = bessel_i0(2 * mpmath.sqrt(mpf(a) * (t - eps)), 220)
            fd = float((hi - lo) / (2 * eps))
        assert got == pytest.approx(fd, rel=1e-10)

    def test_domain(self):
        with pytest.raises(SpecialFunctionError):
            d_dt_bessel_sqrt(0, 1, PREC)


class TestLeadingAsymptotic:
    def test_ratio_at_50(self):
        r = float(bessel_i0(50, PREC) / i0_leading_asymptotic(50, PREC))
        assert 0.99 <= r <= 1.01

    def test_ratio_at_200(self):
        r = float(bessel_i0(200, PREC) / i0_leading_asymptotic(200, PREC))
        assert 0.999 <= r <= 1.001

    def test_ratio_climbs_toward_one(self):
        ratios = [
            float(i0_leading_asymptotic(x, PREC) / bessel_i0(x, PREC))
            for x in (20, 50, 100, 200)
        ]
        assert all(a < b for a, b in zip(ratios, ratios[1:]))
        assert all(r < 1 for r in ratios)

    def test_domain(self):
        with pytest.raises(SpecialFunctionError):
            i0_leading_asymptotic(0, PREC)


class TestPowerSymbolSeries:
    def test_single_term_is_psi(self):
        # exp(a/s)/s at t: psi(1, 0; a t)
        got = power_symbol_series([(Fraction(3, 2), Fraction(1))], 0, 2, PREC)
        ref = wright_series(1, 0, 3, PREC).value
        assert abs(got - ref) / ref < mpf(2) ** (-(PREC - 12))

    def test_two_terms_vs_brute_double_sum(self):
        # exp(a/s^2 + b/s)/s at t: sum_{n,m} a^n b^m t^(2n+m)/(n! m! (2n+m)!)
        a, b, t = mpf("0.7"), mpf("1.3"), mpf(3)
        got = power_symbol_series([(a, Fraction(2)), (b, Fraction(1))], 0, t, PREC)
        with mpmath.workprec(260):
            ref = mpf(0)
            for n in range(80):
                for m in range(160):
                    ref += (
                        a**n
                        * b**m
                        * t ** (2 * n + m)
                        / (
                            mpmath.factorial(n)
                            * mpmath.factorial(m)
                            * mpmath.factorial(2 * n + m)
                        )
                    )
        assert abs(got - ref) / ref < mpf(10) ** (-30)

    def test_pole_shift(self):
        # exp(a/s)/s^3 at t: t^2 * psi(1, 2; a t)
        with mpmath.workprec(PREC + 20):
            a, t = mpf(2), mpf("1.5")
            got = power_symbol_series([(a, Fraction(1))], 2, t, PREC)
            ref = t**2 * wright_series(1, 2, a * t, PREC).value
            assert abs(got - ref) / ref < mpf(2) ** (-(PREC - 12))

    def test_negative_coefficient_rejected(self):
        with pytest.raises(SpecialFunctionError):
            power_symbol_series([(Fraction(-1), Fraction(1))], 0, 1, PREC)
