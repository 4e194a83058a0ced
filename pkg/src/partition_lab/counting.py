"""Named counting families and convolution prefix sums.

A family fixes its truncation order at construction and precomputes the
exact coefficient series once; queries are then read-only (safe to share
across workers).  Families: plain partitions, partitions into q-th powers,
g-weighted partitions, and plane partitions (weight g(n) = n).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

from .series import TruncatedSeries, euler_product_series, make_gap_series
from .weights import (
    WeightFunction,
    identity_weight,
    ones_weight,
    qth_power_indicator,
)


class CountingError(Exception):
    pass


@dataclass(frozen=True)
class CountFamily:
    """A counting function with exact values 0..order."""

    weight: WeightFunction
    order: int
    kind: str

    @cached_property
    def series(self) -> TruncatedSeries:
        return euler_product_series(self.weight, self.order)

    def count(self, n: int) -> int:
        if n < 0 or n > self.order:
            raise CountingError(f"n={n} outside 0..{self.order}")
        return self.series[n]

    def prefix(self, n: int) -> int:
        """sum_{m<=n} count(m), exact."""
        if n < 0 or n > self.order:
            raise CountingError(f"n={n} outside 0..{self.order}")
        return self.series.prefix_sum(n)

    def weighted_prefix(self, n: int) -> int:
        """sum_{m<=n} (n-m) * count(m), computed along two exact routes.

        The direct sum must equal the coefficient-prefix of w_1 * series
        (completing the family with one extra strictly positive part); a
        mismatch means the series arithmetic is broken, so it is asserted.
        """
        if n < 0 or n > self.order:
            raise CountingError(f"n={n} outside 0..{self.order}")
        direct = sum((n - m) * self.series[m] for m in range(n + 1))
        via_series = (make_gap_series(1, self.order) * self.series).prefix_sum(n)
        if direct != via_series:
            raise CountingError(
                f"weighted prefix routes disagree at n={n}: {direct} vs {via_series}"
            )
        return direct


def plain_family(order: int) -> CountFamily:
    return CountFamily(ones_weight(), order, "plain")


def qpower_family(q: int, order: int) -> CountFamily:
    if q == 1:
        return CountFamily(ones_weight(), order, "qpower(1)")
    return CountFamily(qth_power_indicator(q), order, f"qpower({q})")


def weighted_family(g: WeightFunction, order: int) -> CountFamily:
    return CountFamily(g, order, f"weighted[{g.name}]")


def plane_family(order: int) -> CountFamily:
    return CountFamily(identity_weight(), order, "plane")


def divisor_counts(order: int) -> list[int]:
    """d(n) for n = 0..order by sieve (d(0) = 0 by convention)."""
    d = [0] * (order + 1)
    for k in range(1, order + 1):
        for m in range(k, order + 1, k):
            d[m] += 1
    return d


def divisor_series(order: int) -> TruncatedSeries:
    """sum_n d(n) z^n as the sum of the gap series over all gaps <= order."""
    coeffs = [0] * (order + 1)
    for k in range(1, order + 1):
        for m in range(k, order + 1, k):
            coeffs[m] += 1
    return TruncatedSeries(tuple(coeffs))


def convolution_prefix(
    items: Sequence[CountFamily | TruncatedSeries], n: int
) -> int:
    """sum over n_1 + ... + n_r <= n of the product of the item coefficients.

    Realized as the coefficient-prefix of the series product; items must
    share a truncation order >= n.
    """
    if not items:
        raise CountingError("need at least one factor")
    series = [it.series if isinstance(it, CountFamily) else it for it in items]
    order = series[0].order
    for s in series:
        if s.order != order:
            raise CountingError("factors must share a truncation order")
    if n > order:
        raise CountingError(f"n={n} exceeds shared truncation order {order}")
    prod = series[0]
    for s in series[1:]:
        prod = prod * s
    return prod.prefix_sum(n)
