"""Assembly of every explicit inequality into checkable verdicts.

Each verdict compares an exact big-integer count against analytic lower and
upper bounds evaluated on big-floats.  Comparisons are decisive: the bound
evaluator reports an absolute rounding allowance, and whenever the interval
around the bound straddles the exact integer the whole evaluation is redone
at doubled precision (capped at 4096 bits).  A verdict can therefore fail
only if the inequality itself fails at the stated point, not because of
rounding.

The engine caches exact coefficient series and truncated-zeta partial sums
so that sweeps over n = 1..2000 stay within their runtime budgets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
from mpmath import mpf

from . import specials
from .counting import CountFamily, plain_family, plane_family, qpower_family, weighted_family
from .inversion import ContourSpec, phi_h
from .precision import (
    compare_with_slack,
    decide,
    default_precision,
    from_fraction,
    slack_from,
    to_fraction,
)
from .specials import wright_series
from .weights import FunctionSpecH, PiecewiseLinearH, weight_from_h


class VerdictError(Exception):
    pass


@dataclass(frozen=True)
class BoundVerdict:
    """One row of a verification table."""

    label: str
    n: int
    exact: int
    lower: mpf
    upper: mpf
    pass_lower: bool
    pass_upper: bool
    log_lower_margin: float  # ln(exact / lower); nan when lower <= 0
    log_upper_margin: float  # ln(upper / exact)
    extra: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.pass_lower and self.pass_upper


@dataclass(frozen=True)
class SlopeReport:
    label: str
    exponent_expected: Fraction
    exponent_measured: float
    window: tuple[int, int]
    tolerance: float
    samples: int

    @property
    def passed(self) -> bool:
        return abs(self.exponent_measured - float(self.exponent_expected)) <= self.tolerance

    def to_dict(self) -> dict:
        return {
            "label": self.label,
            "exponent_expected": float(self.exponent_expected),
            "exponent_measured": self.exponent_measured,
            "window": list(self.window),
            "tolerance": self.tolerance,
            "samples": self.samples,
            "passed": self.passed,
        }


def _log_margin(num, den) -> float:
    """ln(num/den) as a float; nan when the ratio is not positive."""
    try:
        if num <= 0 or den <= 0:
            return float("nan")
        return float(mpmath.log(num) - mpmath.log(den))
    except Exception:
        return float("nan")


class VerificationEngine:
    """Shared caches plus one method per inequality family."""

    def __init__(self, prec: int | None = None):
        self.prec = prec or default_precision()
        self._families: dict[str, CountFamily] = {}
        self._zetas: dict[tuple[Fraction, int], list[mpf]] = {}
        self._transforms: dict[tuple[int, int, int], tuple[mpf, int]] = {}

    # -- caches ------------------------------------------------------------

    def family(self, kind: str, order: int, q: int | None = None) -> CountFamily:
        if kind == "qpower" and (q or 1) == 1:
            kind = "plain"
        key = f"{kind}:{q}" if kind == "qpower" else kind
        fam = self._families.get(key)
        if fam is None or fam.order < order:
            # grow geometrically so sweeps do not rebuild the exact series
            order = max(order, 2 * (fam.order if fam else 0), 64)
            if kind == "plain":
                fam = plain_family(order)
            elif kind == "qpower":
                fam = qpower_family(q or 1, order)
            elif kind == "plane":
                fam = plane_family(order)
            else:
                raise VerdictError(f"unknown family kind {kind!r}")
            self._families[key] = fam
        return fam

    def zetas(self, s: Fraction | int, n_max: int, prec: int) -> list[mpf]:
        s = Fraction(s)
        cached = self._zetas.get((s, prec))
        if cached is None or len(cached) <= n_max:
            target = max(n_max, 2 * (len(cached) - 1 if cached else 0), 256)
            cached = specials.zeta_partials(s, target, prec)
            self._zetas[(s, prec)] = cached
        return cached

    # -- shared bound pieces -------------------------------------------------

    def _qpower_transform(self, q: int, n: int, prec: int) -> tuple[mpf, int]:
        """psi(1/q, 0; Gamma(1+1/q) zeta_n(1+1/q) n^(1/q)) and an op count."""
        key = (q, n, prec)
        hit = self._transforms.get(key)
        if hit is not None:
            return hit
        with mpmath.workprec(prec + 20):
            zeta = self.zetas(Fraction(q + 1, q), n, prec + 20)[n]
            gam = specials.gamma_pos(Fraction(1, q) + 1, prec + 20)
            if q == 1:
                root = mpf(n)
            else:
                root = mpmath.root(n, q)
            z = gam * zeta * root
            sv = wright_series(Fraction(1, q), 0, z, prec)
            out = (sv.value, sv.ops_estimate() + n + 32)
        if len(self._transforms) > 20000:
            self._transforms.clear()
        self._transforms[key] = out
        return out

    # -- main sandwich -------------------------------------------------------

    def verify_prefix_sandwich(self, n: int) -> BoundVerdict:
        """e^-1 N^-1 I0(2 sqrt(zeta_N(2) N)) <= sum_{m<=N} p(m) <= I0(...)."""
        return self.verify_qpower(1, n, label="prefix_sandwich")

    def verify_qpower(self, q: int, n: int, label: str | None = None) -> BoundVerdict:
        if n < 1 or q < 1:
            raise VerdictError("need q >= 1 and N >= 1")
        label = label or f"qpower{q}"
        fam = self.family("plain" if q == 1 else "qpower", n, q=q)
        exact = fam.prefix(n)

        def upper_eval(prec: int) -> tuple[mpf, Fraction]:
            value, ops = self._qpower_transform(q, n, prec)
            return value, slack_from(value, ops, prec)

        def lower_eval(prec: int) -> tuple[mpf, Fraction]:
            with mpmath.workprec(prec + 20):
                value, ops = self._qpower_transform(q, n, prec)
                low = value / (mpmath.e * n)
                return +low, slack_from(low, ops + 16, prec)

        ok_u, upper = decide(exact, upper_eval, "le", self.prec)
        ok_l, lower = decide(exact, lower_eval, "ge", self.prec)
        return BoundVerdict(
            label=label,
            n=n,
            exact=exact,
            lower=lower,
            upper=upper,
            pass_lower=ok_l,
            pass_upper=ok_u,
            log_lower_margin=_log_margin(exact, lower),
            log_upper_margin=_log_margin(upper, exact),
        )

    # -- single-value bounds ---------------------------------------------------

    def verify_pn_trivial(self, n: int) -> BoundVerdict:
        """e^-1 n^-2 I0(2 sqrt(zeta_n(2) n)) - 1/n <= p(n) <= I0(...)."""
        if n < 1:
            raise VerdictError("need n >= 1")
        fam = self.family("plain", n)
        exact = fam.count(n)

        def upper_eval(prec: int) -> tuple[mpf, Fraction]:
            value, ops = self._qpower_transform(1, n, prec)
            return value, slack_from(value, ops, prec)

        def lower_eval(prec: int) -> tuple[mpf, Fraction]:
            with mpmath.workprec(prec + 20):
                value, ops = self._qpower_transform(1, n, prec)
                low = value / (mpmath.e * n * n) - mpf(1) / n
                return +low, slack_from(value, ops + 24, prec)

        ok_u, upper = decide(exact, upper_eval, "le", self.prec)
        ok_l, lower = decide(exact, lower_eval, "ge", self.prec)
        return BoundVerdict(
            label="pn_trivial",
            n=n,
            exact=exact,
            lower=lower,
            upper=upper,
            pass_lower=ok_l,
            pass_upper=ok_u,
            log_lower_margin=_log_margin(exact, lower),
            log_upper_margin=_log_margin(upper, exact),
        )

    def improved_upper_m(self, n: int, prec: int | None = None) -> int:
        """m = floor(sqrt(n / zeta(2))) with a decisive floor."""
        prec = prec or self.prec
        while True:
            with mpmath.workprec(prec):
                val = mpmath.sqrt(6 * mpf(n)) / mpmath.pi
                m = int(mpmath.floor(val))
                gap = min(val - m, m + 1 - val)
                if gap > mpf(2) ** (-(prec - 16)):
                    return m
            if prec >= 4096:
                return m
            prec *= 2

    def verify_pn_improved_upper(self, n: int) -> BoundVerdict:
        """The monotonicity chain p(n) <= avg of the next m values <= psi bound.

        m = floor(c sqrt(n)) with c = 1/sqrt(zeta(2)); requires m >= 1.
        Both inner inequalities use exact prefix sums; only the final bound
        is analytic.
        """
        m = self.improved_upper_m(n)
        if m < 1:
            raise VerdictError(f"improved upper bound needs m >= 1, got m=0 at n={n}")
        fam = self.family("plain", n + m)
        exact = fam.count(n)
        window_sum = fam.prefix(n + m) - fam.prefix(n)
        chain1 = m * exact <= window_sum
        prefix_total = fam.prefix(n + m)
        chain2 = window_sum <= prefix_total

        def scaled_eval(prec: int) -> tuple[mpf, Fraction]:
            with mpmath.workprec(prec + 20):
                value, ops = self._qpower_transform(1, n + m, prec)
                return +(value / m), slack_from(value, ops + 8, prec)

        ok_u, upper = decide(exact, scaled_eval, "le", self.prec)
        ok_chain3, _ = decide(prefix_total, lambda p: self._soft_eval(n + m, p), "le", self.prec)
        passed_upper = ok_u and chain1 and chain2 and ok_chain3
        return BoundVerdict(
            label="pn_improved_upper",
            n=n,
            exact=exact,
            lower=mpf(0),
            upper=upper,
            pass_lower=True,
            pass_upper=passed_upper,
            log_lower_margin=float("nan"),
            log_upper_margin=_log_margin(upper, exact),
            extra={
                "m": m,
                "chain_monotone": chain1,
                "chain_prefix": chain2,
                "chain_transform": ok_chain3,
            },
        )

    def _soft_eval(self, n: int, prec: int) -> tuple[mpf, Fraction]:
        value, ops = self._qpower_transform(1, n, prec)
        return value, slack_from(value, ops, prec)

    def verify_pn_direct(self, n: int) -> BoundVerdict:
        """The derivative-based chains around p(n), n >= 2.

        With z = zeta_n(2) and y = z - 1 (both as truncated sums):

            lower  = e^-1 n^-1 [ z psi(1,1; z n) - y psi(1,1; y n) ]
            upper  = z psi(1,1; z n) + psi(1,0; y n)

        These equal the I1/I0 forms via I1(2 sqrt(a n)) = sqrt(a n) psi(1,1; a n).
        The variant with an extra factor n on the first upper term is also
        evaluated and recorded (it is strictly weaker for n >= 1).
        """
        if n < 2:
            raise VerdictError("direct bounds assume n >= 2")
        fam = self.family("plain", n)
        exact = fam.count(n)

        def pieces(prec: int) -> tuple[mpf, mpf, mpf, int]:
            with mpmath.workprec(prec + 20):
                z = self.zetas(2, n, prec + 20)[n]
                y = z - 1
                sv1 = wright_series(1, 1, z * n, prec)
                sv2 = wright_series(1, 1, y * n, prec)
                sv3 = wright_series(1, 0, y * n, prec)
                ops = sv1.ops_estimate() + sv2.ops_estimate() + sv3.ops_estimate() + n + 64
                return z * sv1.value, y * sv2.value, sv3.value, ops

        def lower_eval(prec: int) -> tuple[mpf, Fraction]:
            with mpmath.workprec(prec + 20):
                t1, t2, _, ops = pieces(prec)
                low = (t1 - t2) / (mpmath.e * n)
                return +low, slack_from(t1, ops, prec)

        def upper_eval(prec: int) -> tuple[mpf, Fraction]:
            with mpmath.workprec(prec + 20):
                t1, _, i0, ops = pieces(prec)
                up = t1 + i0
                return +up, slack_from(up, ops, prec)

        ok_l, lower = decide(exact, lower_eval, "ge", self.prec)
        ok_u, upper = decide(exact, upper_eval, "le", self.prec)
        with mpmath.workprec(self.prec):
            t1, _, i0, _ = pieces(self.prec)
            printed_upper = +(t1 * n + i0)
        return BoundVerdict(
            label="pn_direct",
            n=n,
            exact=exact,
            lower=lower,
            upper=upper,
            pass_lower=ok_l,
            pass_upper=ok_u,
            log_lower_margin=_log_margin(exact, lower),
            log_upper_margin=_log_margin(upper, exact),
            extra={
                "printed_variant_upper": printed_upper,
                "printed_variant_holds": exact <= to_fraction(printed_upper),
            },
        )

    # -- plane partitions ------------------------------------------------------

    def verify_plane(self, n: int) -> BoundVerdict:
        """Sandwich for plane partitions via the two-index transform pair."""
        if n < 1:
            raise VerdictError("need N >= 1")
        fam = self.family("plane", n)
        exact = fam.prefix(n)

        def pieces(prec: int) -> tuple[mpf, mpf, int]:
            with mpmath.workprec(prec + 20):
                z3 = self.zetas(3, n, prec + 20)[n]
                z2 = self.zetas(2, n, prec + 20)[n]
                sv2 = wright_series(2, 0, z3 * n * n, prec)
                sv1 = wright_series(1, 0, z2 * n, prec)
                ops = sv2.ops_estimate() + sv1.ops_estimate() + 2 * n + 32
                return sv2.value, sv1.value, ops

        def upper_eval(prec: int) -> tuple[mpf, Fraction]:
            with mpmath.workprec(prec + 20):
                a, b, ops = pieces(prec)
                up = a * b
                return +up, slack_from(up, ops, prec)

        def lower_eval(prec: int) -> tuple[mpf, Fraction]:
            with mpmath.workprec(prec + 20):
                a, b, ops = pieces(prec)
                low = a / (b * mpmath.e * n)
                return +low, slack_from(a, ops + 8, prec)

        ok_u, upper = decide(exact, upper_eval, "le", self.prec)
        ok_l, lower = decide(exact, lower_eval, "ge", self.prec)
        return BoundVerdict(
            label="plane",
            n=n,
            exact=exact,
            lower=lower,
            upper=upper,
            pass_lower=ok_l,
            pass_upper=ok_u,
            log_lower_margin=_log_margin(exact, lower),
            log_upper_margin=_log_margin(upper, exact),
        )

    # -- general part-size laws --------------------------------------------------

    def verify_theoremA_general(
        self,
        h: FunctionSpecH,
        n: int,
        spec: ContourSpec | None = None,
    ) -> BoundVerdict:
        """Sandwich for a general part-size law via the contour transform.

        The exact side builds the counting series from the indicator weight
        of {h(1), h(2), ...}; the analytic side inverts exp(lambda)/s.  The
        quadrature's own error estimate enters the comparison slack, and the
        tolerance is tightened once if a comparison is indecisive.
        """
        if isinstance(h, PiecewiseLinearH):
            h.check_integer_values(n)
        g = weight_from_h(h, n)
        fam = weighted_family(g, n)
        exact = fam.prefix(n)
        spec = spec or ContourSpec(tol=1e-8)
        result = phi_h(h, n, n, spec, prec=self.prec)
        value = result.value
        err = Fraction(result.rel_err).limit_denominator(10**15)
        slack = abs(to_fraction(value)) * (err * 4 + Fraction(1, 1 << (self.prec - 16)))
        cu = compare_with_slack(exact, value, slack)
        with mpmath.workprec(self.prec):
            lower = +(value / (mpmath.e * n))
        cl = compare_with_slack(exact, lower, slack)
        if cu == 0 or cl == 0:
            tight = ContourSpec(
                method=spec.method, c=spec.c, T=spec.T, nodes=spec.nodes, tol=spec.tol / 64
            )
            result = phi_h(h, n, n, tight, prec=self.prec * 2)
            value = result.value
            err = Fraction(result.rel_err).limit_denominator(10**15)
            slack = abs(to_fraction(value)) * (err * 4 + Fraction(1, 1 << (self.prec - 16)))
            cu = compare_with_slack(exact, value, slack)
            with mpmath.workprec(self.prec * 2):
                lower = +(value / (mpmath.e * n))
            cl = compare_with_slack(exact, lower, slack)
        return BoundVerdict(
            label=f"theoremA[{h.label()}]",
            n=n,
            exact=exact,
            lower=lower,
            upper=value,
            pass_lower=cl >= 0,
            pass_upper=cu <= 0,
            log_lower_margin=_log_margin(exact, lower),
            log_upper_margin=_log_margin(value, exact),
            extra={"quadrature_rel_err": result.rel_err, "method": result.method},
        )

    # -- asymptotic slope reproduction ---------------------------------------------

    def _asymptotic_transform(self, q: int, n: int, prec: int) -> mpf:
        """Like _qpower_transform but with the untruncated zeta value.

        This is the argument appearing in the cited asymptotics; the
        truncated-sum bound approaches it from below with an O(n^{-1/q})
        drift that shows up as a slowly decaying slope transient.
        """
        with mpmath.workprec(prec + 20):
            zeta = mpmath.zeta(from_fraction(Fraction(q + 1, q), prec + 20))
            gam = specials.gamma_pos(Fraction(1, q) + 1, prec + 20)
            root = mpf(n) if q == 1 else mpmath.root(n, q)
            return wright_series(Fraction(1, q), 0, gam * zeta * root, prec).value

    def slope_check(
        self,
        q: int,
        window: tuple[int, int],
        tolerance: float,
        samples: int = 12,
        zeta_mode: str = "truncated",
    ) -> tuple[SlopeReport, SlopeReport]:
        """Least-squares slopes of the log bound/exact ratios against log N.

        Expected exponents are q/(2(1+q)) for the upper ratio and
        (2+q)/(2(1+q)) for the lower ratio.  `zeta_mode` selects the zeta
        value inside the transform argument: 'truncated' uses the same
        truncated sum as the verified bounds; 'full' uses the limit value,
        which is the form the asymptotic exponents are stated for and
        converges to them much faster (the truncated variant carries an
        O(N^{-1/(q+... )}) transient from the zeta drift).
        """
        n_lo, n_hi = window
        if n_lo < 1 or n_hi <= n_lo:
            raise VerdictError("bad window")
        if zeta_mode not in ("truncated", "full"):
            raise VerdictError("zeta_mode must be 'truncated' or 'full'")
        fam = self.family("plain" if q == 1 else "qpower", n_hi, q=q)
        ns = sorted(
            {
                int(round(n_lo * (n_hi / n_lo) ** (i / (samples - 1))))
                for i in range(samples)
            }
        )
        log_n, log_up, log_low = [], [], []
        for n in ns:
            if zeta_mode == "truncated":
                upper, _ = self._qpower_transform(q, n, self.prec)
            else:
                upper = self._asymptotic_transform(q, n, self.prec)
            exact = fam.prefix(n)
            with mpmath.workprec(self.prec):
                lower = upper / (mpmath.e * n)
                lu = float(mpmath.log(upper) - mpmath.log(exact))
                ll = float(mpmath.log(exact) - mpmath.log(lower))
            log_n.append(math.log(n))
            log_up.append(lu)
            log_low.append(ll)

        def lsq_slope(xs: list[float], ys: list[float]) -> float:
            npts = len(xs)
            mx = sum(xs) / npts
            my = sum(ys) / npts
            num = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
            den = sum((x - mx) ** 2 for x in xs)
            return num / den

        suffix = "" if zeta_mode == "truncated" else "_asymptotic"
        up_report = SlopeReport(
            label=f"upper_ratio_q{q}{suffix}",
            exponent_expected=Fraction(q, 2 * (1 + q)),
            exponent_measured=lsq_slope(log_n, log_up),
            window=window,
            tolerance=tolerance,
            samples=len(ns),
        )
        low_report = SlopeReport(
            label=f"lower_ratio_q{q}{suffix}",
            exponent_expected=Fraction(2 + q, 2 * (1 + q)),
            exponent_measured=lsq_slope(log_n, log_low),
            window=window,
            tolerance=tolerance,
            samples=len(ns),
        )
        return up_report, low_report

    def exponential_growth_trend(self, window: tuple[int, int], samples: int = 8) -> list[float]:
        """ln(sum_{m<=N} p(m)) / (pi sqrt(2N/3)) along the window.

        The classical leading exponent; the ratios must climb toward one.
        """
        n_lo, n_hi = window
        fam = self.family("plain", n_hi)
        ns = sorted(
            {
                int(round(n_lo * (n_hi / n_lo) ** (i / (samples - 1))))
                for i in range(samples)
            }
        )
        out = []
        for n in ns:
            exact = fam.prefix(n)
            out.append(float(mpmath.log(exact)) / (math.pi * math.sqrt(2 * n / 3)))
        return out
