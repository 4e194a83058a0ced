import pytest
from fractions import Fraction

from hypothesis import given, settings
from hypothesis import strategies as st

from partition_lab.series import (
    OrderMismatchError,
    SeriesError,
    TruncatedSeries,
    divisor_weight_cache,
    euler_product_series,
    exp_counting_series,
    exp_series,
    log_weight_series,
    make_gap_series,
    one,
    prefix_sum_I,
)
from conftest import brute_partition_count, brute_plane_partition_count, brute_qpower_count


class TestGapSeries:
    def test_k1(self):
        assert make_gap_series(1, 3).coeffs == (0, 1, 1, 1)

    def test_k2(self):
        assert make_gap_series(2, 5).coeffs == (0, 0, 1, 0, 1, 0)

    def test_beyond_truncation(self):
        assert make_gap_series(7, 3).coeffs == (0, 0, 0, 0)

    def test_k0_rejected(self):
        with pytest.raises(SeriesError):
            make_gap_series(0, 3)


class TestMul:
    def test_basic(self):
        a = TruncatedSeries((1, 1))
        assert (a * a).coeffs == (1, 2)

    def test_identity(self):
        s = make_gap_series(2, 6)
        assert (s * one(6)).coeffs == s.coeffs

    def test_z_times_z(self):
        z = TruncatedSeries((0, 1, 0))
        assert (z * z).coeffs == (0, 0, 1)

    def test_order_mismatch(self):
        with pytest.raises(OrderMismatchError):
            TruncatedSeries((1, 1)) * TruncatedSeries((1, 1, 1))


small_series = st.lists(st.integers(-9, 9), min_size=4, max_size=4).map(
    lambda c: TruncatedSeries(tuple(c))
)


@given(small_series, small_series)
@settings(max_examples=60, deadline=None)
def test_mul_commutative(a, b):
    assert (a * b).coeffs == (b * a).coeffs


@given(small_series, small_series, small_series)
@settings(max_examples=60, deadline=None)
def test_mul_associative(a, b, c):
    assert ((a * b) * c).coeffs == (a * (b * c)).coeffs


@given(small_series, small_series, st.integers(0, 3))
@settings(max_examples=60, deadline=None)
def test_prefix_linear(a, b, n):
    assert (a + b).prefix_sum(n) == a.prefix_sum(n) + b.prefix_sum(n)


class TestEulerProduct:
    def test_plain(self):
        assert euler_product_series(lambda n: 1, 4).coeffs == (1, 1, 2, 3, 5)

    def test_plane(self):
        assert euler_product_series(lambda n: n, 3).coeffs == (1, 1, 3, 6)

    def test_squares(self):
        g = lambda n: 1 if int(round(n**0.5)) ** 2 == n else 0
        assert euler_product_series(g, 4).coeffs == (1, 1, 1, 1, 2)

    def test_plain_matches_enumeration_to_30(self):
        s = euler_product_series(lambda n: 1, 30)
        for n in range(31):
            assert s[n] == brute_partition_count(n)

    def test_plane_matches_enumeration_to_10(self):
        s = euler_product_series(lambda n: n, 10)
        for n in range(11):
            assert s[n] == brute_plane_partition_count(n)

    def test_squares_match_enumeration_to_25(self):
        g = lambda n: 1 if int(round(n**0.5)) ** 2 == n else 0
        s = euler_product_series(g, 25)
        for n in range(26):
            assert s[n] == brute_qpower_count(n, 2)

    def test_negative_weight_rejected(self):
        with pytest.raises(SeriesError):
            euler_product_series(lambda n: -1, 3)


def test_divisor_weights_are_sigma():
    cache = divisor_weight_cache(lambda n: 1, 40)
    for j in range(1, 41):
        assert cache[j] == sum(d for d in range(1, j + 1) if j % d == 0)


class TestExpSeries:
    def test_exp_of_zero(self):
        assert exp_series([0, 0, 0]) == [1, 0, 0]

    def test_requires_zero_constant(self):
        with pytest.raises(SeriesError):
            exp_series([1, 0])

    def test_matches_counting_small(self):
        # exp(sum_{k<=N} w_k/k) at N = 2 and 3 gives the partition counts
        assert exp_counting_series(lambda n: 1, 2).coeffs == (1, 1, 2)
        assert exp_counting_series(lambda n: 1, 3).coeffs == (1, 1, 2, 3)

    def test_dual_route_identity_to_50(self):
        # the acceptance identity: recurrence route == exp route, coefficientwise
        a = euler_product_series(lambda n: 1, 50)
        b = exp_counting_series(lambda n: 1, 50)
        assert a.coeffs == b.coeffs

    def test_dual_route_plane_to_30(self):
        a = euler_product_series(lambda n: n, 30)
        b = exp_counting_series(lambda n: n, 30)
        assert a.coeffs == b.coeffs

    def test_fractional_log_series_is_not_integral(self):
        # a half-integer log coefficient exponentiates to fractional output,
        # which is exactly what the counting wrapper rejects
        b = exp_series([Fraction(0), Fraction(1, 2), Fraction(0)])
        assert any(c.denominator != 1 for c in b)


def test_log_weight_series_values():
    # coefficient of z^m is (sum_{d|m} d g(d))/m; for g=1 and m=4: (1+2+4)/4
    lw = log_weight_series(lambda n: 1, 4)
    assert lw[4] == Fraction(7, 4)
    assert lw[1] == 1


class TestPrefix:
    def test_p_series(self):
        s = euler_product_series(lambda n: 1, 3)
        assert s.prefix_sum(3) == 7
        assert prefix_sum_I(s, 3) == 7

    def test_constant(self):
        s = TruncatedSeries((42, 1, 1))
        assert s.prefix_sum(0) == 42

    def test_plane_prefix_matches_enumeration(self):
        s = euler_product_series(lambda n: n, 3)
        expected = sum(brute_plane_partition_count(n) for n in range(4))
        assert s.prefix_sum(3) == expected == 11

    def test_beyond_truncation_rejected(self):
        with pytest.raises(SeriesError):
            euler_product_series(lambda n: 1, 3).prefix_sum(4)
