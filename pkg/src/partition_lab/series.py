"""Exact truncated formal power series over Python big integers.

Everything in this module is exact: coefficients are integers (or
`fractions.Fraction` in the rational cross-check paths) and no rounding ever
occurs.  A series knows its truncation order N and carries exactly N+1
coefficients; binary operations require equal orders so that precision loss
is impossible by construction.

The two workhorses are

* ``euler_product_series``: coefficients of  prod_{n>=1} (1-z^n)^(-g(n))
  via the logarithmic-derivative recurrence
      m * a_m = sum_{j=1}^{m} c_j * a_{m-j},   c_j = sum_{d|j} d*g(d),
  whose exact divisions double as a built-in self test, and

* ``exp_series``: exp of a rational series, kept as an independent second
  route to the same counting numbers.

``prefix_sum`` realizes the linear functional "sum of the coefficients up
to N" that the rest of the package builds bounds around.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence


class SeriesError(Exception):
    """Base error for exact-series operations."""


class OrderMismatchError(SeriesError):
    """Binary operation on series with different truncation orders."""


class InexactDivisionError(SeriesError):
    """The counting recurrence produced a non-integer; weights are corrupt."""


class NonIntegralSeriesError(SeriesError):
    """A rational series expected to be integral has fractional coefficients."""


@dataclass(frozen=True)
class TruncatedSeries:
    """Power series truncated at order N: coeffs[n] is the z^n coefficient."""

    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) == 0:
            raise SeriesError("series needs at least the constant coefficient")

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    def __getitem__(self, n: int) -> int:
        return self.coeffs[n]

    def _check_order(self, other: "TruncatedSeries") -> None:
        if self.order != other.order:
            raise OrderMismatchError(
                f"truncation orders differ: {self.order} vs {other.order}"
            )

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_order(other)
        return TruncatedSeries(tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_order(other)
        return TruncatedSeries(tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        """Cauchy product truncated at the shared order; exact."""
        self._check_order(other)
        n = self.order
        a, b = self.coeffs, other.coeffs
        out = [0] * (n + 1)
        for i, ai in enumerate(a):
            if ai == 0:
                continue
            for j in range(n + 1 - i):
                bj = b[j]
                if bj:
                    out[i + j] += ai * bj
        return TruncatedSeries(tuple(out))

    def pow(self, e: int) -> "TruncatedSeries":
        if e < 0:
            raise SeriesError("negative powers are not defined here")
        result = one(self.order)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base if e > 1 else base
            e >>= 1
        return result

    def shift_constant(self, amount: int) -> "TruncatedSeries":
        """Add `amount` to the constant coefficient (e.g. w -> 1 + w)."""
        return TruncatedSeries((self.coeffs[0] + amount,) + self.coeffs[1:])

    def prefix_sum(self, n: int) -> int:
        """Sum of coefficients 0..n (the coefficient-prefix functional)."""
        if n < 0:
            raise SeriesError("prefix bound must be non-negative")
        if n > self.order:
            raise SeriesError(f"prefix bound {n} exceeds truncation order {self.order}")
        return sum(self.coeffs[: n + 1])


def one(order: int) -> TruncatedSeries:
    """Multiplicative identity at the given truncation order."""
    return TruncatedSeries((1,) + (0,) * order)


def make_gap_series(k: int, order: int) -> TruncatedSeries:
    """z^k + z^{2k} + z^{3k} + ... truncated at `order`.

    Coefficient m is 1 iff k divides m and m >= k.
    """
    if k <= 0:
        raise SeriesError("gap size k must be >= 1")
    coeffs = [0] * (order + 1)
    for m in range(k, order + 1, k):
        coeffs[m] = 1
    return TruncatedSeries(tuple(coeffs))


def prefix_sum_I(series: TruncatedSeries, n: int) -> int:
    """Functional form of :meth:`TruncatedSeries.prefix_sum`."""
    return series.prefix_sum(n)


@dataclass(frozen=True)
class DivisorWeightCache:
    """weights[j-1] = sum_{d | j} d*g(d) for j = 1..N (index shift by one)."""

    weights: tuple[int, ...]

    @property
    def order(self) -> int:
        return len(self.weights)

    def __getitem__(self, j: int) -> int:
        return self.weights[j - 1]


def divisor_weight_cache(g: Callable[[int], int], order: int) -> DivisorWeightCache:
    """Sieve c_j = sum_{d|j} d*g(d) for j up to `order` in O(N log N)."""
    weights = [0] * order
    for d in range(1, order + 1):
        gd = g(d)
        if gd == 0:
            continue
        if gd < 0:
            raise SeriesError(f"weight g({d}) = {gd} is negative")
        step = d * gd
        for j in range(d, order + 1, d):
            weights[j - 1] += step
    return DivisorWeightCache(tuple(weights))


def euler_product_series(g: Callable[[int], int], order: int) -> TruncatedSeries:
    """Coefficients of prod_{n>=1} (1 - z^n)^(-g(n)) up to `order`.

    g must take non-negative integer values on 1..order.  Every division in
    the recurrence is checked to be exact; a remainder would mean the weight
    cache is inconsistent with the recurrence and is reported as
    :class:`InexactDivisionError` rather than silently rounded.
    """
    cache = divisor_weight_cache(g, order)
    a = [0] * (order + 1)
    a[0] = 1
    w = cache.weights
    for m in range(1, order + 1):
        acc = 0
        for j in range(1, m + 1):
            cj = w[j - 1]
            if cj:
                acc += cj * a[m - j]
        q, r = divmod(acc, m)
        if r:
            raise InexactDivisionError(
                f"recurrence sum {acc} not divisible by {m}; corrupted weights"
            )
        a[m] = q
    return TruncatedSeries(tuple(a))


def log_weight_series(g: Callable[[int], int], order: int) -> list[Fraction]:
    """Rational coefficients of sum_{k<=N} w_k/k, w_k = sum_n g(n) z^{kn}.

    The z^m coefficient is (sum_{d|m} d*g(d)) / m, i.e. the divisor-weight
    cache entry divided by m.
    """
    cache = divisor_weight_cache(g, order)
    return [Fraction(0)] + [Fraction(cache[m], m) for m in range(1, order + 1)]


def exp_series(coeffs: Sequence[Fraction | int]) -> list[Fraction]:
    """Exact exponential of a rational series with zero constant term.

    Uses b' = a'b:  m*b_m = sum_{j=1}^{m} j*a_j*b_{m-j}.
    """
    a = [Fraction(c) for c in coeffs]
    if a and a[0] != 0:
        raise SeriesError("exp_series requires a zero constant term")
    n = len(a) - 1
    b = [Fraction(0)] * (n + 1)
    b[0] = Fraction(1)
    for m in range(1, n + 1):
        acc = Fraction(0)
        for j in range(1, m + 1):
            if a[j]:
                acc += j * a[j] * b[m - j]
        b[m] = acc / m
    return b


def exp_counting_series(g: Callable[[int], int], order: int) -> TruncatedSeries:
    """Second, independent route to ``euler_product_series`` via exp.

    Exponentiates sum_{k<=N} w_k/k over exact rationals and verifies that
    every coefficient is an integer before returning.
    """
    b = exp_series(log_weight_series(g, order))
    out = []
    for m, c in enumerate(b):
        if c.denominator != 1:
            raise NonIntegralSeriesError(
                f"coefficient of z^{m} is {c}, not an integer"
            )
        out.append(c.numerator)
    return TruncatedSeries(tuple(out))
