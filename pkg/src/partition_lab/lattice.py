"""Brute-force lattice-point oracles for weighted simplices and curved regions.

The geometric ground truth behind the bound machinery: counting integer
points (coordinates >= 1 or >= 0) under a weighted linear constraint, the
exact simplex volume prod(a_k)/n!, and the sandwich

    #(points >= 1)  <=  volume  <=  #(points >= 0),

together with its curved variant where each coordinate passes through a
monotone part-size law h (floor/ceiling rounding gives the two enclosing
lattice counts, Monte Carlo integrates the curved volume).
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Literal, Sequence

from .series import make_gap_series, one
from .weights import FunctionSpecH, PowerLawH

ENUMERATION_GUARD = 10**8  # max product of per-axis ranges


class LatticeError(Exception):
    pass


class EnumerationGuardError(LatticeError):
    """The instance is too large for exhaustive enumeration; shrink it."""


Origin = Literal["from_one", "from_zero"]


@dataclass(frozen=True)
class LatticeProblem:
    """Count x in Z^rho with sum_i weights[i] * x_i <= bound.

    `from_one` restricts to coordinates >= 1, `from_zero` to >= 0.
    """

    weights: tuple[int, ...]
    bound: int
    origin: Origin

    def __post_init__(self) -> None:
        if not self.weights:
            raise LatticeError("need at least one axis")
        if any(w < 1 for w in self.weights):
            raise LatticeError("weights must be positive integers")
        if self.bound < 0:
            raise LatticeError("bound must be non-negative")
        if self.origin not in ("from_one", "from_zero"):
            raise LatticeError(f"unknown origin {self.origin!r}")


def _guard(ranges: Sequence[int]) -> None:
    prod = 1
    for r in ranges:
        prod *= max(r, 1)
        if prod > ENUMERATION_GUARD:
            raise EnumerationGuardError(
                f"axis-range product exceeds {ENUMERATION_GUARD}; "
                "shrink the instance"
            )


def count_lattice(problem: LatticeProblem) -> int:
    """Exact point count by nested enumeration (innermost axis closed form)."""
    lo = 1 if problem.origin == "from_one" else 0
    weights = sorted(problem.weights, reverse=True)
    n = problem.bound
    _guard([n // w + 1 - lo for w in weights])

    def rec(idx: int, remaining: int) -> int:
        w = weights[idx]
        if remaining < lo * w:
            return 0
        if idx == len(weights) - 1:
            return remaining // w - lo + 1
        total = 0
        for x in range(lo, remaining // w + 1):
            total += rec(idx + 1, remaining - x * w)
        return total

    return rec(0, n)


def simplex_volume(intercepts: Sequence[Fraction | int]) -> Fraction:
    """Volume of {x >= 0 : sum x_i / a_i <= 1} = prod(a_i) / n!, exact."""
    if not intercepts:
        raise LatticeError("need at least one intercept")
    prod = Fraction(1)
    for a in intercepts:
        a = Fraction(a)
        if a <= 0:
            raise LatticeError("intercepts must be positive")
        prod *= a
    return prod / math.factorial(len(intercepts))


@dataclass(frozen=True)
class SandwichReport:
    problem: LatticeProblem
    count_from_one: int
    volume: Fraction
    count_from_zero: int

    @property
    def passed(self) -> bool:
        return self.count_from_one <= self.volume <= self.count_from_zero

    def to_dict(self) -> dict:
        return {
            "weights": list(self.problem.weights),
            "bound": self.problem.bound,
            "count_from_one": self.count_from_one,
            "volume": str(self.volume),
            "volume_float": float(self.volume),
            "count_from_zero": self.count_from_zero,
            "passed": self.passed,
        }


def sandwich_check(problem: LatticeProblem) -> SandwichReport:
    """count(>=1) <= volume <= count(>=0) for the weighted simplex.

    A violation would falsify the core geometric inequality, so it raises
    rather than returning a failed report.
    """
    c1 = count_lattice(
        LatticeProblem(problem.weights, problem.bound, "from_one")
    )
    c0 = count_lattice(
        LatticeProblem(problem.weights, problem.bound, "from_zero")
    )
    vol = simplex_volume([Fraction(problem.bound, w) for w in problem.weights])
    report = SandwichReport(problem, c1, vol, c0)
    if not report.passed:
        raise LatticeError(f"volume sandwich violated: {report.to_dict()}")
    return report


# ---------------------------------------------------------------------------
# curved regions through a part-size law
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CurvedProblem:
    h: FunctionSpecH
    weights: tuple[int, ...]
    bound: int

    def __post_init__(self) -> None:
        if not self.weights or any(w < 1 for w in self.weights):
            raise LatticeError("weights must be positive integers")
        if self.bound < 1:
            raise LatticeError("bound must be positive")


def count_curved_lattice(problem: CurvedProblem, origin: Origin) -> int:
    """#{x integer, coords >= 1 (or 0), sum_i w_i h(x_i) <= bound}."""
    lo = 1 if origin == "from_one" else 0
    h = problem.h
    weights = sorted(problem.weights, reverse=True)
    n = problem.bound

    def axis_max(w: int, remaining: int) -> int:
        # largest integer x with w*h(x) <= remaining
        x = 0
        while w * h.value(x + 1) <= remaining:
            x += 1
        return x

    _guard([axis_max(w, n) + 1 - lo for w in weights])

    def rec(idx: int, remaining: int) -> int:
        w = weights[idx]
        total = 0
        x = lo
        while True:
            used = w * h.value(x)
            if used > remaining:
                break
            if idx == len(weights) - 1:
                total += 1
            else:
                total += rec(idx + 1, remaining - used)
            x += 1
        return total

    return rec(0, n)


def curved_volume_quadrature(problem: CurvedProblem, nodes: int = 96) -> float:
    """Volume of {x >= 0 : sum w_i h(x_i) <= bound} for h = x^q.

    Recursive one-dimensional Gauss-Legendre reduction; the closed Dirichlet
    form Gamma(1+1/q)^rho / Gamma(1+rho/q) * prod (bound/w_i)^(1/q) is the
    cross-check (both are returned by `curved_sandwich_check`).
    """
    h = problem.h
    if not isinstance(h, PowerLawH):
        raise LatticeError("quadrature volume is implemented for power laws")
    q = h.q
    import numpy as np

    xs, ws = np.polynomial.legendre.leggauss(nodes)
    xs = (xs + 1.0) / 2.0
    ws = ws / 2.0

    weights = problem.weights

    def vol(idx: int, remaining: float) -> float:
        if remaining <= 0:
            return 0.0
        w = weights[idx]
        hi = (remaining / w) ** (1.0 / q)
        if idx == len(weights) - 1:
            return hi
        total = 0.0
        for xx, ww in zip(xs, ws):
            t = hi * xx
            total += ww * vol(idx + 1, remaining - w * t**q)
        return total * hi

    return vol(0, float(problem.bound))


def dirichlet_volume(problem: CurvedProblem) -> float:
    h = problem.h
    if not isinstance(h, PowerLawH):
        raise LatticeError("closed-form volume is implemented for power laws")
    q = h.q
    rho = len(problem.weights)
    g1 = math.gamma(1.0 + 1.0 / q)
    prod = 1.0
    for w in problem.weights:
        prod *= (problem.bound / w) ** (1.0 / q)
    return g1**rho / math.gamma(1.0 + rho / q) * prod


@dataclass(frozen=True)
class CurvedSandwichReport:
    problem_weights: tuple[int, ...]
    bound: int
    count_minus: int
    count_plus: int
    mc_volume: float
    mc_halfwidth: float
    mc_samples: int
    seed: int
    quadrature_volume: float | None
    closed_volume: float | None
    conclusive: bool
    passed: bool

    def to_dict(self) -> dict:
        return dict(vars(self))


def curved_sandwich_check(
    problem: CurvedProblem,
    samples: int = 200_000,
    seed: int = 1729,
    z_score: float = 4.0,
) -> CurvedSandwichReport:
    """Monte Carlo the curved volume and check it sits between the counts.

    count_minus (coords >= 1, i.e. ceiling rounding) must not exceed the
    upper confidence bound, and the lower confidence bound must not exceed
    count_plus (coords >= 0, floor rounding).  A too-wide interval yields an
    inconclusive report, never a hard failure; for power laws the volume is
    also computed exactly (Dirichlet form) and by recursive quadrature.
    """
    h = problem.h
    weights = problem.weights
    n = problem.bound
    c_minus = count_curved_lattice(problem, "from_one")
    c_plus = count_curved_lattice(problem, "from_zero")

    box = [float(h.inverse_float(n / w)) for w in weights]
    box_vol = math.prod(box)
    rng = random.Random(seed)
    hits = 0
    if isinstance(h, PowerLawH):
        q = h.q

        def inside(pt):
            return sum(w * t**q for w, t in zip(weights, pt)) <= n

    else:

        def inside(pt):
            return sum(w * h.value_float(t) for w, t in zip(weights, pt)) <= n

    for _ in range(samples):
        pt = [rng.uniform(0.0, b) for b in box]
        if inside(pt):
            hits += 1
    p_hat = hits / samples
    half = z_score * math.sqrt(max(p_hat * (1 - p_hat), 1e-12) / samples)
    vol = p_hat * box_vol
    vol_half = half * box_vol

    quad = closed = None
    if isinstance(h, PowerLawH):
        quad = curved_volume_quadrature(problem)
        closed = dirichlet_volume(problem)
        if abs(quad - closed) > 1e-6 * max(closed, 1.0):
            raise LatticeError(
                f"volume routes disagree: quadrature {quad} vs closed {closed}"
            )

    conclusive = vol_half < 0.5 * max(c_plus - c_minus, 1)
    passed = (c_minus <= vol + vol_half) and (vol - vol_half <= c_plus)
    return CurvedSandwichReport(
        problem_weights=weights,
        bound=n,
        count_minus=c_minus,
        count_plus=c_plus,
        mc_volume=vol,
        mc_halfwidth=vol_half,
        mc_samples=samples,
        seed=seed,
        quadrature_volume=quad,
        closed_volume=closed,
        conclusive=conclusive,
        passed=passed,
    )


# ---------------------------------------------------------------------------
# series-route equivalence for monomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class MonomialReport:
    exponents: tuple[int, ...]
    bound: int
    series_from_one: int
    lattice_from_one: int
    series_from_zero: int
    lattice_from_zero: int

    @property
    def passed(self) -> bool:
        return (
            self.series_from_one == self.lattice_from_one
            and self.series_from_zero == self.lattice_from_zero
        )

    def to_dict(self) -> dict:
        d = dict(vars(self))
        d["passed"] = self.passed
        return d


def monomial_count_equivalence(exponents: Sequence[int], bound: int) -> MonomialReport:
    """Coefficient-prefix of prod w_k^{r_k} vs direct lattice counting.

    The prefix of prod_k w_k^{r_k} counts points with coordinates >= 1, and
    of prod_k (1 + w_k)^{r_k} points with coordinates >= 0, both under
    sum k * (coords in block k) <= bound.  Exact equality is asserted.
    """
    exponents = tuple(exponents)
    if sum(exponents) < 1:
        raise LatticeError("need at least one factor (sum of exponents >= 1)")
    if any(r < 0 for r in exponents):
        raise LatticeError("exponents must be non-negative")
    weights = []
    for k, r in enumerate(exponents, start=1):
        weights.extend([k] * r)

    series_one = one(bound)
    series_zero = one(bound)
    for k, r in enumerate(exponents, start=1):
        if r == 0:
            continue
        w = make_gap_series(k, bound)
        series_one = series_one * w.pow(r)
        series_zero = series_zero * w.shift_constant(1).pow(r)
    s1 = series_one.prefix_sum(bound)
    s0 = series_zero.prefix_sum(bound)

    l1 = count_lattice(LatticeProblem(tuple(weights), bound, "from_one"))
    l0 = count_lattice(LatticeProblem(tuple(weights), bound, "from_zero"))
    report = MonomialReport(exponents, bound, s1, l1, s0, l0)
    if not report.passed:
        raise LatticeError(f"monomial equivalence violated: {report.to_dict()}")
    return report
