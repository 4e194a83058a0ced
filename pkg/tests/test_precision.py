from fractions import Fraction

import mpmath
import pytest
from mpmath import mpf

from partition_lab.precision import (
    MAX_PRECISION_BITS,
    compare_with_slack,
    decide,
    default_precision,
    from_fraction,
    sci_string,
    slack_from,
    to_fraction,
)


class TestToFraction:
    def test_exact_roundtrip(self):
        for q in (Fraction(3, 8), Fraction(-7, 2), Fraction(1), Fraction(0)):
            assert to_fraction(from_fraction(q, 80)) == q

    def test_huge_exponent(self):
        with mpmath.workprec(64):
            x = mpmath.exp(200)
        f = to_fraction(x)
        assert f > 10**86
        assert to_fraction(from_fraction(f, 64)) == f

    def test_rejects_nan_and_inf(self):
        with pytest.raises(ValueError):
            to_fraction(mpf("nan"))
        with pytest.raises(ValueError):
            to_fraction(mpf("inf"))


class TestCompareWithSlack:
    def test_clear_positions(self):
        v = from_fraction(Fraction(10), 64)
        assert compare_with_slack(9, v, Fraction(1, 100)) == -1
        assert compare_with_slack(11, v, Fraction(1, 100)) == +1

    def test_straddle_is_indecisive(self):
        v = from_fraction(Fraction(10), 64)
        assert compare_with_slack(10, v, Fraction(1, 100)) == 0


class TestDecide:
    def test_doubles_until_decisive(self):
        calls = []

        def evaluate(prec):
            calls.append(prec)
            # value 10 with slack that only becomes decisive at higher prec
            slack = Fraction(2) if prec < 400 else Fraction(1, 10)
            return from_fraction(Fraction(21, 2), 64), slack

        ok, value = decide(10, evaluate, "le", 100)
        assert ok
        assert calls == [100, 200, 400]

    def test_ge_direction(self):
        def evaluate(prec):
            return from_fraction(Fraction(5), 64), Fraction(1, 1000)

        ok, _ = decide(7, evaluate, "ge", 64)
        assert ok
        ok, _ = decide(3, evaluate, "ge", 64)
        assert not ok

    def test_cap_resolves_against_midpoint(self):
        def evaluate(prec):
            return from_fraction(Fraction(10), 64), Fraction(10**6)

        ok, _ = decide(9, evaluate, "le", MAX_PRECISION_BITS)
        assert ok

    def test_bad_relation(self):
        with pytest.raises(ValueError):
            decide(1, lambda p: (mpf(1), Fraction(0)), "lt", 64)


class TestSlackFrom:
    def test_scales_with_ops_and_precision(self):
        mag = from_fraction(Fraction(1000), 64)
        small = slack_from(mag, 10, 200)
        big = slack_from(mag, 10000, 200)
        assert small < big
        assert slack_from(mag, 10, 100) > small

    def test_zero_magnitude_still_positive(self):
        assert slack_from(mpf(0), 5, 100) > 0


class TestSciString:
    def test_twelve_digits_lowercase(self):
        assert sci_string(from_fraction(Fraction(1, 3), 120)) == "3.33333333333e-1"

    def test_integers_and_negatives(self):
        assert sci_string(Fraction(-12345, 10)) == "-1.23450000000e3"
        assert sci_string(7) == "7.00000000000e0"

    def test_zero(self):
        assert sci_string(0) == "0.00000000000e0"

    def test_carry_into_next_decade(self):
        assert sci_string(Fraction(999999999999999, 10**14)) == "1.00000000000e1"

    def test_extreme_exponents(self):
        assert sci_string(Fraction(10) ** 100, digits=6) == "1.00000e100"
        assert sci_string(Fraction(1, 10**50), digits=6) == "1.00000e-50"

    def test_single_digit(self):
        assert sci_string(Fraction(25, 10), digits=1) == "3e0"

    def test_round_half_away_from_zero(self):
        assert sci_string(Fraction(15, 10), digits=1) == "2e0"
        assert sci_string(Fraction(-15, 10), digits=1) == "-2e0"

    def test_matches_float_repr_on_random_values(self):
        import random

        rng = random.Random(7)
        for _ in range(200):
            x = rng.uniform(-1e6, 1e6)
            rendered = sci_string(Fraction(x), digits=12)
            assert float(rendered) == pytest.approx(x, rel=1e-11)


def test_default_precision_env(monkeypatch):
    monkeypatch.delenv("PARTITION_LAB_PRECISION", raising=False)
    assert default_precision() == 192
    monkeypatch.setenv("PARTITION_LAB_PRECISION", "256")
    assert default_precision() == 256
    monkeypatch.setenv("PARTITION_LAB_PRECISION", "32")
    with pytest.raises(ValueError):
        default_precision()
