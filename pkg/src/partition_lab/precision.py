"""Extended-precision plumbing shared across the package.

Numeric bound values are mpmath ``mpf`` big-floats (sign/mantissa/exponent
with explicit working precision), so quantities like e^114 never overflow
and precision is a per-call choice rather than global state.  This module
adds the three pieces mpmath does not provide directly:

* exact conversion of an mpf to a ``Fraction`` (mantissa * 2^exponent),
  so bound-versus-integer comparisons can be decided without rounding;

* slack-aware three-way comparison used by the verdict engine: a bound is
  only declared above/below an exact count when the gap exceeds the
  accumulated rounding allowance, otherwise the caller retries at higher
  precision;

* a deterministic scientific renderer (fixed significant digits, lowercase
  ``e``) implemented in integer arithmetic, so emitted tables are
  byte-identical across runs and platforms.
"""

from __future__ import annotations

import os
from fractions import Fraction
from typing import Callable

import mpmath
from mpmath import mpf

DEFAULT_PRECISION_BITS = 192
MAX_PRECISION_BITS = 4096
PRECISION_ENV_VAR = "PARTITION_LAB_PRECISION"


def default_precision() -> int:
    """Default working precision in bits, overridable via the environment."""
    raw = os.environ.get(PRECISION_ENV_VAR)
    if raw is None:
        return DEFAULT_PRECISION_BITS
    try:
        bits = int(raw)
    except ValueError as exc:
        raise ValueError(f"{PRECISION_ENV_VAR} must be an integer, got {raw!r}") from exc
    if bits < 64:
        raise ValueError(f"{PRECISION_ENV_VAR} must be >= 64, got {bits}")
    return bits


def to_fraction(x: mpf) -> Fraction:
    """Exact rational value of an mpf (mantissa times a power of two)."""
    if mpmath.isnan(x) or mpmath.isinf(x):
        raise ValueError(f"cannot convert {x} to a fraction")
    sign, man, exp, _ = x._mpf_
    if man == 0:
        return Fraction(0)
    value = Fraction(man, 1)
    if exp >= 0:
        value *= 1 << exp
    else:
        value /= 1 << (-exp)
    return -value if sign else value


def from_fraction(q: Fraction | int, prec: int) -> mpf:
    q = Fraction(q)
    with mpmath.workprec(prec):
        return mpmath.mpf(q.numerator) / q.denominator


def slack_from(magnitude: mpf, ops: int, prec: int) -> Fraction:
    """Absolute rounding allowance for `ops` operations at `prec` bits.

    Each mpf operation is accurate to <= 1 ulp and the evaluations here sum
    non-negative terms (condition number one), so ops * 2^(8-prec) times
    the largest intermediate magnitude is a generous envelope.
    """
    mag = abs(to_fraction(magnitude))
    if mag == 0:
        mag = Fraction(1)
    return mag * Fraction(256 * max(ops, 1), 1 << prec)


def compare_with_slack(exact: int | Fraction, value: mpf, abs_slack: Fraction) -> int:
    """Position of `exact` against `value` up to an absolute slack.

    Returns -1 if exact < value certainly, +1 if exact > value certainly,
    0 if the slack interval around `value` straddles `exact` (indecisive).
    """
    v = to_fraction(value)
    if Fraction(exact) < v - abs_slack:
        return -1
    if Fraction(exact) > v + abs_slack:
        return +1
    return 0


def decide(
    exact: int | Fraction,
    evaluate: Callable[[int], tuple[mpf, Fraction]],
    relation: str,
    start_prec: int,
) -> tuple[bool, mpf]:
    """Decide `exact <= bound` ('le') or `bound <= exact` ('ge') decisively.

    `evaluate(prec)` yields (bound value, absolute slack).  The working
    precision doubles while the slack interval straddles the exact value,
    up to MAX_PRECISION_BITS; if still indecisive there the comparison is
    resolved against the midpoint (which can only happen when the two sides
    agree to ~2^-4096, far beyond any stated tolerance).
    """
    if relation not in ("le", "ge"):
        raise ValueError("relation must be 'le' or 'ge'")
    prec = start_prec
    while True:
        value, slack = evaluate(prec)
        pos = compare_with_slack(exact, value, slack)
        if pos != 0:
            verdict = (pos < 0) if relation == "le" else (pos > 0)
            return verdict, value
        if prec >= MAX_PRECISION_BITS:
            vq = to_fraction(value)
            ok = Fraction(exact) <= vq if relation == "le" else vq <= Fraction(exact)
            return ok, value
        prec = min(2 * prec, MAX_PRECISION_BITS)


def sci_string(x: mpf | int | Fraction, digits: int = 12) -> str:
    """Deterministic scientific notation: d.dd...de<exp>, lowercase e.

    Rendering is done with exact integer arithmetic (round half away from
    zero), so the output bytes depend only on the value, never on the
    platform or the mpmath context.
    """
    if digits < 1:
        raise ValueError("digits must be >= 1")
    if isinstance(x, (int, Fraction)):
        q = Fraction(x)
    else:
        q = to_fraction(x)
    if q == 0:
        mant = "0" if digits == 1 else "0." + "0" * (digits - 1)
        return f"{mant}e0"
    sign = "-" if q < 0 else ""
    q = abs(q)
    # initial decimal exponent estimate via bit length, then correct
    e10 = len(str(q.numerator)) - len(str(q.denominator))
    while 10**e10 <= q:
        e10 += 1
    while 10 ** (e10 - 1) > q:
        e10 -= 1
    # now 10^(e10-1) <= q < 10^e10; significand in [1, 10)
    shift = digits - e10
    scaled = q * 10**shift if shift >= 0 else q / 10 ** (-shift)
    num, den = scaled.numerator, scaled.denominator
    units, rem = divmod(num, den)
    if 2 * rem >= den:
        units += 1
    if units >= 10**digits:  # rounding bumped into the next decade
        units //= 10
        e10 += 1
    s = str(units)
    mant = s[0] if digits == 1 else s[0] + "." + s[1:]
    return f"{sign}{mant}e{e10 - 1}"
