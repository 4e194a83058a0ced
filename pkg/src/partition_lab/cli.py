"""Command-line front end.

Subcommands:

* ``verify``        sweep a bound family and emit one verdict row per N
* ``table``         exact counting values (count and prefix) per n
* ``oracle``        lattice equivalence + volume sandwich suite
* ``bromwich-check`` quadrature-versus-series cross validation grid
* ``slope``         asymptotic ratio-exponent reproduction

Output formats: pretty (default), csv, json.  Real numbers are rendered by
a canonical scientific formatter (12 significant digits, lowercase ``e``)
backed by exact integer arithmetic, so output bytes are identical across
runs for a fixed configuration, including the seed.

Exit codes: 0 all checks pass; 1 a verdict failed; 2 quadrature failure;
3 invalid input.  The default working precision is 192 bits, overridable
with --precision-bits or the PARTITION_LAB_PRECISION environment variable.
The default seed for randomized oracle instances is 1729.
"""

from __future__ import annotations

import argparse
import io
import json
import random
import sys
from dataclasses import dataclass
from fractions import Fraction

import mpmath

from . import __version__
from .counting import plain_family, plane_family, qpower_family
from .inversion import (
    ContourSpec,
    QuadratureError,
    invert_power_symbol,
    phi_h,
    talbot_invert,
    symbol_for_h,
)
from .lattice import (
    CurvedProblem,
    LatticeProblem,
    curved_sandwich_check,
    monomial_count_equivalence,
    sandwich_check,
)
from .precision import default_precision, sci_string
from .specials import gamma_pos, wright_series, zeta_trunc
from .verdicts import BoundVerdict, VerificationEngine
from .weights import PiecewiseLinearH, PowerLawH, WeightSpecError

DEFAULT_SEED = 1729

CSV_HEADER = "label,N,exact,lower,upper,log_lower_margin,log_upper_margin,pass"


class InputValidationError(Exception):
    pass


@dataclass
class RunConfig:
    command: str
    family: str = "plain"
    q: int = 2
    n_max: int = 50
    window: tuple[int, int] | None = None
    precision_bits: int | None = None
    format: str = "pretty"
    seed: int = DEFAULT_SEED
    output: str | None = None
    h_file: str | None = None
    rho_max: int = 3
    weight_max: int = 4
    instances: int = 100
    grid: str = "default"
    corrupt_bound: str | None = None  # test hook: flips matching labels


def _fmt_float(x: float) -> str:
    if x != x:  # nan
        return "nan"
    return sci_string(Fraction(x))


def _verdict_row(v: BoundVerdict) -> dict:
    return {
        "label": v.label,
        "N": v.n,
        "exact": v.exact,
        "lower": sci_string(v.lower),
        "upper": sci_string(v.upper),
        "log_lower_margin": _fmt_float(v.log_lower_margin),
        "log_upper_margin": _fmt_float(v.log_upper_margin),
        "pass": v.passed,
    }


def parse_h_file(path: str, n_check: int) -> PiecewiseLinearH:
    """Two-column 'x h(x)' text: blank lines and '#' comments ignored.

    Validation failures name the offending row (1-based, counting all
    lines).  The interpolated law must hit integers at integer arguments up
    to n_check.
    """
    pairs: list[tuple[Fraction, Fraction]] = []
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise InputValidationError(f"cannot read h-file: {exc}") from exc
    for idx, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise InputValidationError(f"h-file row {idx}: expected two columns")
        try:
            x, y = Fraction(parts[0]), Fraction(parts[1])
        except (ValueError, ZeroDivisionError) as exc:
            raise InputValidationError(f"h-file row {idx}: bad number") from exc
        if not pairs and (x != 0 or y != 0):
            raise InputValidationError(f"h-file row {idx}: first row must be '0 0'")
        if pairs and (x <= pairs[-1][0] or y <= pairs[-1][1]):
            raise InputValidationError(f"h-file row {idx}: columns must increase")
        pairs.append((x, y))
    if len(pairs) < 2:
        raise InputValidationError("h-file needs at least two rows")
    h = PiecewiseLinearH(tuple(pairs))
    try:
        h.check_integer_values(n_check)
    except WeightSpecError as exc:
        raise InputValidationError(f"h-file: {exc}") from exc
    return h


# ---------------------------------------------------------------------------
# command implementations (each returns a list of row dicts)
# ---------------------------------------------------------------------------


def _cmd_verify(cfg: RunConfig, engine: VerificationEngine) -> list[dict]:
    rows: list[dict] = []
    if cfg.family == "plain":
        engine.family("plain", cfg.n_max)
        for n in range(1, cfg.n_max + 1):
            rows.append(_verdict_row(engine.verify_prefix_sandwich(n)))
    elif cfg.family == "qpower":
        engine.family("qpower", cfg.n_max, q=cfg.q)
        for n in range(1, cfg.n_max + 1):
            rows.append(_verdict_row(engine.verify_qpower(cfg.q, n)))
    elif cfg.family == "plane":
        engine.family("plane", cfg.n_max)
        for n in range(1, cfg.n_max + 1):
            rows.append(_verdict_row(engine.verify_plane(n)))
    elif cfg.family == "theoremA":
        if not cfg.h_file:
            raise InputValidationError("--family theoremA requires --h-file")
        h = parse_h_file(cfg.h_file, cfg.n_max)
        rows.append(_verdict_row(engine.verify_theoremA_general(h, cfg.n_max)))
    else:
        raise InputValidationError(f"unknown family {cfg.family!r}")
    return rows


def _cmd_table(cfg: RunConfig) -> list[dict]:
    if cfg.family == "plain":
        fam = plain_family(cfg.n_max)
    elif cfg.family == "qpower":
        fam = qpower_family(cfg.q, cfg.n_max)
    elif cfg.family == "plane":
        fam = plane_family(cfg.n_max)
    else:
        raise InputValidationError(f"table does not support family {cfg.family!r}")
    rows = []
    for n in range(cfg.n_max + 1):
        rows.append(
            {
                "label": fam.kind,
                "N": n,
                "count": fam.count(n),
                "prefix": fam.prefix(n),
            }
        )
    return rows


def _cmd_oracle(cfg: RunConfig) -> list[dict]:
    rows: list[dict] = []
    # exhaustive monomial equivalence
    exps: list[tuple[int, ...]] = []

    def gen(prefix: tuple[int, ...], remaining: int) -> None:
        if len(prefix) == cfg.weight_max:
            if sum(prefix) >= 1:
                exps.append(prefix)
            return
        for r in range(remaining + 1):
            gen(prefix + (r,), remaining - r)

    gen((), cfg.rho_max)
    for exponents in sorted(exps):
        for bound in range(1, cfg.n_max + 1):
            rep = monomial_count_equivalence(exponents, bound)
            rows.append(
                {
                    "label": "monomial",
                    "N": bound,
                    "exponents": list(exponents),
                    "count_from_one": rep.lattice_from_one,
                    "count_from_zero": rep.lattice_from_zero,
                    "pass": rep.passed,
                }
            )
    # seeded random volume sandwiches
    rng = random.Random(cfg.seed)
    for i in range(cfg.instances):
        rho = rng.randint(1, 4)
        weights = tuple(rng.randint(1, max(2, cfg.weight_max)) for _ in range(rho))
        bound = rng.randint(1, 20)
        rep = sandwich_check(LatticeProblem(weights, bound, "from_one"))
        rows.append(
            {
                "label": "sandwich",
                "N": bound,
                "weights": list(weights),
                "count_from_one": rep.count_from_one,
                "volume": float(rep.volume),
                "count_from_zero": rep.count_from_zero,
                "pass": rep.passed,
            }
        )
    # one curved spot check
    curved = curved_sandwich_check(
        CurvedProblem(PowerLawH(2), (1, 1), 16), samples=100_000, seed=cfg.seed
    )
    rows.append(
        {
            "label": "curved",
            "N": curved.bound,
            "count_from_one": curved.count_minus,
            "count_from_zero": curved.count_plus,
            "mc_volume": curved.mc_volume,
            "pass": curved.passed,
        }
    )
    return rows


_BROMWICH_GRID_A = (Fraction(1, 2), 1, 2, 5)
_BROMWICH_GRID_U = (Fraction(1, 3), Fraction(1, 2), Fraction(1), Fraction(2))
_BROMWICH_GRID_V = (Fraction(0), Fraction(1))
_BROMWICH_GRID_T = (Fraction(1, 2), 1, 2, 5)


def power_symbol_reference(a, u, v, t, prec: int) -> "mpmath.mpf":
    """Series value psi(u, v; a t^u) t^v used as the quadrature oracle."""
    u = Fraction(u)
    v = Fraction(v)
    with mpmath.workprec(prec):
        av = mpmath.mpf(Fraction(a).numerator) / Fraction(a).denominator
        tv = mpmath.mpf(Fraction(t).numerator) / Fraction(t).denominator
        z = av * tv ** (mpmath.mpf(u.numerator) / u.denominator)
        return wright_series(u, v, z, prec).value * tv ** (
            mpmath.mpf(v.numerator) / v.denominator
        )


def _cmd_bromwich_check(cfg: RunConfig, prec: int) -> list[dict]:
    rows: list[dict] = []
    tol = 1e-6
    for a in _BROMWICH_GRID_A:
        for u in _BROMWICH_GRID_U:
            for v in _BROMWICH_GRID_V:
                for t in _BROMWICH_GRID_T:
                    res = invert_power_symbol(a, u, v, t, ContourSpec(tol=1e-9))
                    with mpmath.workprec(prec):
                        ref = power_symbol_reference(a, u, v, t, prec)
                        rel = float(abs(res.value - ref) / ref)
                    rows.append(
                        {
                            "label": "power_symbol",
                            "a": str(a),
                            "u": str(u),
                            "v": str(v),
                            "t": str(t),
                            "rel_err": rel,
                            "pass": rel <= tol,
                        }
                    )
    # phi for power laws against the closed form
    for q in (1, 2, 3):
        for n_trunc, x in ((5, 5), (20, 10), (50, 50)):
            res = phi_h(PowerLawH(q), n_trunc, x, ContourSpec(tol=1e-9), prec=prec)
            with mpmath.workprec(prec):
                coef = gamma_pos(Fraction(1, q) + 1, prec) * zeta_trunc(
                    n_trunc, Fraction(q + 1, q), prec
                )
                z = coef * mpmath.root(x, q)
                ref = wright_series(Fraction(1, q), 0, z, prec).value
                rel = float(abs(res.value - ref) / ref)
            rows.append(
                {
                    "label": "phi_power",
                    "q": q,
                    "N": n_trunc,
                    "x": x,
                    "rel_err": rel,
                    "pass": rel <= tol,
                }
            )
    # contour-shift independence (the line position must not matter)
    sym = symbol_for_h(PowerLawH(2), 10, prec)
    res1 = talbot_invert(sym, 10, tol=1e-9, shift=Fraction(1))
    res2 = talbot_invert(sym, 10, tol=1e-9, shift=Fraction(2))
    with mpmath.workprec(prec):
        rel = float(abs(res1.value - res2.value) / res1.value)
    rows.append(
        {
            "label": "shift_independence",
            "rel_err": rel,
            "pass": rel <= res1.rel_err + res2.rel_err + 1e-9,
        }
    )
    return rows


def _cmd_slope(cfg: RunConfig, engine: VerificationEngine) -> list[dict]:
    window = cfg.window or (200, 2000)
    tol = 0.06 if cfg.q == 1 else 0.08
    rows = []
    for mode in ("truncated", "full"):
        up, low = engine.slope_check(cfg.q, window, tolerance=tol, zeta_mode=mode)
        rows.extend([up.to_dict(), low.to_dict()])
    for r in rows:
        r["pass"] = r.pop("passed")
    return rows


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------


def _render_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    buf.write(CSV_HEADER + "\n")
    for r in rows:
        buf.write(
            ",".join(
                [
                    str(r.get("label", "")),
                    str(r.get("N", "")),
                    str(r.get("exact", "")),
                    str(r.get("lower", "")),
                    str(r.get("upper", "")),
                    str(r.get("log_lower_margin", "")),
                    str(r.get("log_upper_margin", "")),
                    "true" if r.get("pass") else "false",
                ]
            )
            + "\n"
        )
    return buf.getvalue()


def _render_json(cfg: RunConfig, rows: list[dict]) -> str:
    failures = sum(1 for r in rows if r.get("pass") is False)
    doc = {
        "config": {
            "command": cfg.command,
            "family": cfg.family,
            "q": cfg.q,
            "n_max": cfg.n_max,
            "window": list(cfg.window) if cfg.window else None,
            "format": cfg.format,
            "seed": cfg.seed,
            "precision_bits": cfg.precision_bits,
        },
        "rows": rows,
        "summary": {
            "total": len(rows),
            "failures": failures,
            "passed": failures == 0,
        },
    }
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


def _render_pretty(rows: list[dict]) -> str:
    if not rows:
        return "(no rows)\n"
    keys: list[str] = []
    for r in rows:
        for k in r:
            if k not in keys:
                keys.append(k)
    table = [[str(r.get(k, "")) for k in keys] for r in rows]
    widths = [max(len(k), *(len(row[i]) for row in table)) for i, k in enumerate(keys)]
    out = ["  ".join(k.ljust(w) for k, w in zip(keys, widths)).rstrip()]
    for row in table:
        out.append("  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip())
    failures = sum(1 for r in rows if r.get("pass") is False)
    out.append(f"-- {len(rows)} rows, {failures} failures")
    return "\n".join(out) + "\n"


def _sort_rows(rows: list[dict]) -> list[dict]:
    return sorted(rows, key=lambda r: (str(r.get("label", "")), r.get("N", 0) or 0))


def run_config(cfg: RunConfig) -> tuple[int, str]:
    """Execute a configuration; returns (exit_code, rendered output)."""
    prec = cfg.precision_bits or default_precision()
    engine = VerificationEngine(prec)
    try:
        if cfg.command == "verify":
            rows = _cmd_verify(cfg, engine)
        elif cfg.command == "table":
            rows = _cmd_table(cfg)
        elif cfg.command == "oracle":
            rows = _cmd_oracle(cfg)
        elif cfg.command == "bromwich-check":
            rows = _cmd_bromwich_check(cfg, prec)
        elif cfg.command == "slope":
            rows = _cmd_slope(cfg, engine)
        else:
            raise InputValidationError(f"unknown command {cfg.command!r}")
    except InputValidationError:
        raise
    except QuadratureError:
        raise
    if cfg.corrupt_bound:
        for r in rows:
            if r.get("label") == cfg.corrupt_bound:
                r["pass"] = not r.get("pass", False)
    rows = _sort_rows(rows)
    if cfg.format == "csv":
        text = _render_csv(rows)
    elif cfg.format == "json":
        text = _render_json(cfg, rows)
    else:
        text = _render_pretty(rows)
    failures = sum(1 for r in rows if r.get("pass") is False)
    return (1 if failures else 0), text


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="partition-lab",
        description="Exact partition-type counts and verified analytic bounds.",
    )
    p.add_argument("--version", action="version", version=f"partition-lab {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp: argparse.ArgumentParser) -> None:
        sp.add_argument("--format", choices=("pretty", "csv", "json"), default="pretty")
        sp.add_argument("--output", help="write the artifact to this path")
        sp.add_argument(
            "--precision-bits",
            type=int,
            help="working precision (default 192; env PARTITION_LAB_PRECISION)",
        )
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)
        sp.add_argument("--corrupt-bound", help=argparse.SUPPRESS)

    sp = sub.add_parser("verify", help="verify a bound family over 1..n-max")
    sp.add_argument(
        "--family", choices=("plain", "qpower", "plane", "theoremA"), default="plain"
    )
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--n-max", type=int, default=50)
    sp.add_argument("--h-file", help="piecewise-linear law table for theoremA")
    common(sp)

    sp = sub.add_parser("table", help="exact counting table")
    sp.add_argument("--family", choices=("plain", "qpower", "plane"), default="plain")
    sp.add_argument("--q", type=int, default=2)
    sp.add_argument("--n-max", type=int, default=50)
    common(sp)

    sp = sub.add_parser("oracle", help="lattice equivalence and volume sandwiches")
    sp.add_argument("--rho-max", type=int, default=3)
    sp.add_argument("--weight-max", type=int, default=4)
    sp.add_argument("--n-max", type=int, default=12)
    sp.add_argument("--instances", type=int, default=100)
    common(sp)

    sp = sub.add_parser("bromwich-check", help="quadrature vs series cross checks")
    sp.add_argument("--grid", choices=("default",), default="default")
    common(sp)

    sp = sub.add_parser("slope", help="asymptotic ratio exponents")
    sp.add_argument("--q", type=int, default=1)
    sp.add_argument("--window", type=int, nargs=2, metavar=("LO", "HI"))
    common(sp)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        family=getattr(args, "family", "plain"),
        q=getattr(args, "q", 2),
        n_max=getattr(args, "n_max", 50),
        window=tuple(args.window) if getattr(args, "window", None) else None,
        precision_bits=args.precision_bits,
        format=args.format,
        seed=args.seed,
        output=args.output,
        h_file=getattr(args, "h_file", None),
        rho_max=getattr(args, "rho_max", 3),
        weight_max=getattr(args, "weight_max", 4),
        instances=getattr(args, "instances", 100),
        grid=getattr(args, "grid", "default"),
        corrupt_bound=args.corrupt_bound,
    )
    try:
        code, text = run_config(cfg)
    except (InputValidationError, WeightSpecError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except QuadratureError as exc:
        print(f"quadrature failure: {exc}", file=sys.stderr)
        return 2
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
