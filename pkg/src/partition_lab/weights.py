"""Descriptors for part-size laws and integer weight functions.

Two families of inputs drive the generalized counting functions:

* a strictly increasing part-size law h with h(0) = 0 and integer values at
  integers, either a pure power x^q or a piecewise-linear interpolation of
  given knots (the final segment extends with its slope);

* an integer weight g on the positive integers (how many "colors" part n
  carries), together with one-sided real envelopes g_- <= g(ceil x) <= g_+
  used by the contour bounds.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Literal


class WeightSpecError(Exception):
    """Invalid part-size law or weight function."""


# ---------------------------------------------------------------------------
# part-size laws h
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class PowerLawH:
    """h(x) = x^q for a positive integer q."""

    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise WeightSpecError("power exponent q must be >= 1")

    def value(self, x: Fraction | int) -> Fraction:
        return Fraction(x) ** self.q

    def int_value(self, n: int) -> int:
        return n**self.q

    def inverse_float(self, y: float) -> float:
        return y ** (1.0 / self.q)

    def label(self) -> str:
        return f"x^{self.q}"


@dataclass(frozen=True)
class PiecewiseLinearH:
    """Piecewise-linear h through `knots`; last segment extends by its slope.

    knots are (x, h(x)) pairs with strictly increasing coordinates in both
    columns and h(0) = 0.  Integer arguments inside the knot range must map
    to integers (checked on demand by :meth:`check_integer_values`, since the
    counting series needs integer part sizes).
    """

    knots: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        if len(self.knots) < 2:
            raise WeightSpecError("need at least two knots")
        if self.knots[0] != (0, 0):
            raise WeightSpecError("first knot must be (0, 0)")
        xs = [k[0] for k in self.knots]
        ys = [k[1] for k in self.knots]
        for i in range(len(xs) - 1):
            if xs[i + 1] <= xs[i]:
                raise WeightSpecError(f"knot abscissas not increasing at row {i + 1}")
            if ys[i + 1] <= ys[i]:
                raise WeightSpecError(
                    f"knot values not strictly increasing at row {i + 1}"
                )

    @classmethod
    def from_pairs(cls, pairs) -> "PiecewiseLinearH":
        return cls(tuple((Fraction(x), Fraction(y)) for x, y in pairs))

    @property
    def slopes(self) -> tuple[Fraction, ...]:
        ks = self.knots
        return tuple(
            (ks[i + 1][1] - ks[i][1]) / (ks[i + 1][0] - ks[i][0])
            for i in range(len(ks) - 1)
        )

    def value(self, x: Fraction | int) -> Fraction:
        x = Fraction(x)
        if x < 0:
            raise WeightSpecError("h is defined for x >= 0")
        ks = self.knots
        if x >= ks[-1][0]:
            return ks[-1][1] + self.slopes[-1] * (x - ks[-1][0])
        for i in range(len(ks) - 1):
            if x <= ks[i + 1][0]:
                return ks[i][1] + self.slopes[i] * (x - ks[i][0])
        raise AssertionError("unreachable")

    def int_value(self, n: int) -> int:
        v = self.value(n)
        if v.denominator != 1:
            raise WeightSpecError(f"h({n}) = {v} is not an integer")
        return v.numerator

    def inverse(self, y: Fraction | int) -> Fraction:
        """h^{-1}(y); well defined since h is strictly increasing."""
        y = Fraction(y)
        if y < 0:
            raise WeightSpecError("h^{-1} is defined for y >= 0")
        ks = self.knots
        if y >= ks[-1][1]:
            return ks[-1][0] + (y - ks[-1][1]) / self.slopes[-1]
        for i in range(len(ks) - 1):
            if y <= ks[i + 1][1]:
                return ks[i][0] + (y - ks[i][1]) / self.slopes[i]
        raise AssertionError("unreachable")

    def inverse_float(self, y: float) -> float:
        return float(self.inverse(Fraction(y).limit_denominator(10**12)))

    def value_float(self, x: float) -> float:
        ks = self.knots
        xs = [float(a) for a, _ in ks]
        ys = [float(b) for _, b in ks]
        ms = [float(m) for m in self.slopes]
        if x >= xs[-1]:
            return ys[-1] + ms[-1] * (x - xs[-1])
        for i in range(len(xs) - 1):
            if x <= xs[i + 1]:
                return ys[i] + ms[i] * (x - xs[i])
        raise WeightSpecError("h is defined for x >= 0")

    def check_integer_values(self, n_max: int) -> None:
        for n in range(n_max + 1):
            self.int_value(n)

    def label(self) -> str:
        return f"pl[{len(self.knots)} knots]"


FunctionSpecH = PowerLawH | PiecewiseLinearH


def identity_h() -> PiecewiseLinearH:
    """h(x) = x as a one-segment piecewise-linear law."""
    return PiecewiseLinearH.from_pairs([(0, 0), (1, 1)])


# ---------------------------------------------------------------------------
# integer weights g
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class WeightFunction:
    """Integer-valued weight g(n) >= 0 on the positive integers."""

    fn: Callable[[int], int]
    name: str

    def __call__(self, n: int) -> int:
        v = self.fn(n)
        if v < 0:
            raise WeightSpecError(f"{self.name}: g({n}) = {v} is negative")
        return v


def ones_weight() -> WeightFunction:
    return WeightFunction(lambda n: 1, "g=1")


def identity_weight() -> WeightFunction:
    return WeightFunction(lambda n: n, "g=n")


def qth_power_indicator(q: int) -> WeightFunction:
    """1 when n is a perfect q-th power, else 0."""
    if q < 1:
        raise WeightSpecError("q must be >= 1")

    def ind(n: int) -> int:
        r = round(n ** (1.0 / q))
        for m in (r - 1, r, r + 1):
            if m >= 1 and m**q == n:
                return 1
        return 0

    return WeightFunction(ind, f"g=[n is m^{q}]")


def weight_from_h(h: FunctionSpecH, n_max: int) -> WeightFunction:
    """Indicator of the part-size set {h(1), h(2), ...} up to n_max.

    h is strictly increasing, so each value occurs at most once.
    """
    values = set()
    i = 1
    while True:
        v = h.int_value(i)
        if v > n_max:
            break
        values.add(v)
        i += 1
    return WeightFunction(lambda n: 1 if n in values else 0, f"g from h={h.label()}")


def shifted_identity_weight(offset: int) -> WeightFunction:
    """g(n) = n + offset, clipped at zero (offset -1 gives n-1 >= 0)."""
    return WeightFunction(lambda n: max(n + offset, 0), f"g=n{offset:+d}")


# ---------------------------------------------------------------------------
# envelopes for weighted contour bounds
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class AffineEnvelope:
    """g_side(x) = a*x + b on [0, infinity), required non-negative."""

    a: Fraction
    b: Fraction

    def __post_init__(self) -> None:
        if self.a < 0 or self.b < 0:
            raise WeightSpecError("affine envelope must be non-negative on x >= 0")

    def value(self, x: Fraction | float) -> Fraction | float:
        return self.a * x + self.b


@dataclass(frozen=True)
class PiecewiseLinearEnvelope:
    """Piecewise-linear envelope; beyond the last knot the slope continues."""

    knots: tuple[tuple[Fraction, Fraction], ...]

    def __post_init__(self) -> None:
        xs = [k[0] for k in self.knots]
        if len(xs) < 2 or xs[0] != 0:
            raise WeightSpecError("envelope knots must start at x = 0")
        for i in range(len(xs) - 1):
            if xs[i + 1] <= xs[i]:
                raise WeightSpecError("envelope knots not increasing")

    def segments(self) -> list[tuple[Fraction, Fraction, Fraction, Fraction]]:
        """(x_lo, x_hi, slope, value_at_lo); last tuple has x_hi = -1 (ray)."""
        out = []
        ks = self.knots
        for i in range(len(ks) - 1):
            slope = (ks[i + 1][1] - ks[i][1]) / (ks[i + 1][0] - ks[i][0])
            out.append((ks[i][0], ks[i + 1][0], slope, ks[i][1]))
        out.append((ks[-1][0], Fraction(-1), out[-1][2], ks[-1][1]))
        return out

    def value(self, x: Fraction | float) -> Fraction | float:
        xq = Fraction(x).limit_denominator(10**12) if isinstance(x, float) else Fraction(x)
        ks = self.knots
        segs = self.segments()
        if xq >= ks[-1][0]:
            lo, _, slope, v0 = segs[-1]
            return v0 + slope * (xq - lo)
        for lo, hi, slope, v0 in segs[:-1]:
            if xq <= hi:
                return v0 + slope * (xq - lo)
        raise WeightSpecError("envelope evaluated left of zero")


Envelope = AffineEnvelope | PiecewiseLinearEnvelope

Side = Literal["plus", "minus"]


@dataclass(frozen=True)
class EnvelopeSide:
    """An integer weight g with a one-sided real envelope.

    For side 'plus' the envelope must dominate g(ceil x) pointwise; for
    side 'minus' it must be dominated by it.  ``check_on_grid`` samples the
    condition at the half-integers and integers, where ceil is extremal.
    """

    g: WeightFunction
    side: Side
    envelope: Envelope

    def check_on_grid(self, x_max: int) -> None:
        pts = [Fraction(k, 2) for k in range(0, 2 * x_max + 1)]
        for x in pts:
            ceil_x = -((-x) // 1)
            gx = self.g(int(ceil_x)) if x > 0 else self.g_at_zero()
            ex = Fraction(self.envelope.value(x))
            if self.side == "plus" and ex < gx:
                raise WeightSpecError(f"plus-envelope below g(ceil x) at x={x}")
            if self.side == "minus" and ex > gx:
                raise WeightSpecError(f"minus-envelope above g(ceil x) at x={x}")

    def g_at_zero(self) -> int:
        # ceil(0) = 0; by convention g(0) is the weight's value at 0 when it
        # is defined, else 0 (the series never uses g(0) directly).
        try:
            return max(self.g.fn(0), 0)
        except Exception:
            return 0


def shift_rule_envelope(a: int, b: int, side: Side) -> AffineEnvelope:
    """Envelope for an increasing affine weight g(x) = a*x + b.

    Plus side takes g(x+1), minus side takes g(x-1) clipped at zero slope
    intercept (only used with a >= 0).
    """
    if side == "plus":
        return AffineEnvelope(Fraction(a), Fraction(b + a))
    return AffineEnvelope(Fraction(a), Fraction(max(b - a, 0)))
