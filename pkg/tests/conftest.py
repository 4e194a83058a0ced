"""Shared brute-force oracles and fixtures.

Oracles here are deliberately independent of the package's series
machinery: partition counts come from bounded recursion over part lists,
plane partitions from explicit enumeration of monotone fillings.
"""

from __future__ import annotations

import functools

import pytest

from partition_lab.verdicts import VerificationEngine


@functools.lru_cache(maxsize=None)
def count_partitions_with_parts(n: int, parts: tuple[int, ...], idx: int = 0) -> int:
    """Number of multisets from `parts` (sorted ascending) summing to n."""
    if n == 0:
        return 1
    if idx >= len(parts) or parts[idx] > n:
        return 0
    p = parts[idx]
    return sum(
        count_partitions_with_parts(n - j * p, parts, idx + 1)
        for j in range(n // p + 1)
    )


def brute_partition_count(n: int) -> int:
    return count_partitions_with_parts(n, tuple(range(1, n + 1))) if n else 1


def brute_qpower_count(n: int, q: int) -> int:
    parts = tuple(m**q for m in range(1, n + 1) if m**q <= n)
    return count_partitions_with_parts(n, parts) if n else 1


def _partitions_bounded(n: int, bound: tuple[int, ...]):
    """Yield partitions of n that fit under `bound` pointwise (weakly dec.)."""
    if n == 0:
        yield ()
        return
    if not bound:
        return

    def rec(remaining: int, max_len: int, cap: int, prefix: tuple[int, ...]):
        if remaining == 0:
            yield prefix
            return
        if max_len == 0:
            return
        top = min(cap, remaining, bound[len(prefix)])
        for first in range(top, 0, -1):
            yield from rec(remaining - first, max_len - 1, first, prefix + (first,))

    yield from rec(n, len(bound), n, ())


def brute_plane_partition_count(n: int) -> int:
    """Enumerate monotone row fillings: each row a partition, rows decreasing
    pointwise, total sum n."""
    if n == 0:
        return 1

    def rec(remaining: int, bound: tuple[int, ...]) -> int:
        if remaining == 0:
            return 1
        total = 0
        for s in range(1, remaining + 1):
            for row in _partitions_bounded(s, bound):
                total += rec(remaining - s, row)
        return total

    return rec(n, tuple([n] * n))


@pytest.fixture(scope="session")
def engine() -> VerificationEngine:
    return VerificationEngine(192)
