"""Command-line surface: moments, poly, verify.

Output is machine-readable (json default, csv, or pretty text) and
reproducible: the same flags, precision and seed give byte-identical
output. Exit codes: 0 success, 2 usage/config error, 3 numeric failure,
4 verification failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .errors import (
    ConfigurationError,
    DegenerateDegreeError,
    InconsistentPatternError,
    InsufficientMomentsError,
    IntegrabilityError,
    NormalizationError,
    OrthoieqError,
    QuadratureError,
    SingularHankelError,
    SingularSystemError,
    WeightSyntaxError,
)
from .hankel import hankel_condition, normalization, solve_polynomial
from .moments import contour_moments, moments
from .numeric import DEFAULT_PRECISION, PrecisionContext, Scalar
from .polynomials import Polynomial, inner_moment, shifted_inner
from .variants import (
    Additive,
    Functional,
    LinearShift,
    Multiplicative,
    check_arbitrary_f,
    enumerate_multiplicative,
    parity_pattern,
    solve_functional,
    solve_linear_shift,
    solve_multiplicative,
    verify,
)
from .weights import Interval, contour_weight, normalize, parse_weight, preset_weight

_NUMERIC_ERRORS = (
    SingularHankelError,
    SingularSystemError,
    DegenerateDegreeError,
    QuadratureError,
    NormalizationError,
    IntegrabilityError,
    InsufficientMomentsError,
    InconsistentPatternError,
    ZeroDivisionError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_VERIFY = 4


# ---------------------------------------------------------------------------
# scalar serialization


def scalar_json(s: Scalar, context: PrecisionContext):
    if s.is_rational():
        f = s.as_fraction()
        return {"num": str(f.numerator), "den": str(f.denominator)}
    re, im = s.real_imag(context.precision)
    mp = context.mp
    return {"re": _decimal(re, mp, context.precision), "im": _decimal(im, mp, context.precision)}


def _decimal(x, mp, digits):
    if x == 0:
        x = abs(x)  # normalize -0
    return mp.nstr(mp.mpf(x), digits)


def scalar_pretty(s: Scalar, context: PrecisionContext) -> str:
    if s.is_rational():
        f = s.as_fraction()
        return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"
    re, im = s.real_imag(context.precision)
    mp = context.mp
    re_s = mp.nstr(mp.mpf(re), 6)
    if im == 0:
        return re_s
    im_s = mp.nstr(mp.mpf(abs(im)), 6)
    sign = "+" if im >= 0 else "-"
    return f"{re_s} {sign} {im_s}i"


def scalar_from_json(obj, mode: str, context: PrecisionContext) -> Scalar:
    if "num" in obj:
        value = Scalar.exact(Fraction(int(obj["num"]), int(obj["den"])))
        return value if mode == "exact" else value.to_float(context)
    mp = context.mp
    return Scalar(mp.mpc(mp.mpf(obj["re"]), mp.mpf(obj["im"])), context.precision)


# ---------------------------------------------------------------------------
# argument plumbing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="orthoieq",
        description="Polynomial solutions of nonlinear integral equations, from weight moments.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p):
        group = p.add_argument_group("weight")
        group.add_argument("--preset", choices=sorted(
            ["laguerre", "jacobi-add", "chebyshev-u2-add",
             "jacobi-mult", "chebyshev-u2-mult", "uniform-symmetric"]))
        group.add_argument("--gamma", help="laguerre parameter (rational, e.g. 5/2 or 2.5)")
        group.add_argument("--p", help="jacobi parameter p")
        group.add_argument("--q", help="jacobi parameter q")
        group.add_argument("--expr", help="weight expression, e.g. 'exp(-x)'")
        group.add_argument("--interval", nargs=2, metavar=("ALPHA", "BETA"),
                           help="interval endpoints; inf / -inf allowed")
        group.add_argument("--contour", action="store_true",
                           help="complex contour weight 1/(i pi (2k+1) x) from -1 to 1")
        group.add_argument("--winding", type=int, default=0, help="contour winding number k")
        num = p.add_argument_group("numerics")
        num.add_argument("--mode", choices=["float", "exact"], default="float")
        num.add_argument("--precision", type=int,
                         default=int(os.environ.get("ORTHOIEQ_PRECISION", DEFAULT_PRECISION)))
        num.add_argument("--format", choices=["json", "csv", "pretty"], default="json")
        num.add_argument("--seed", type=int, default=0, help="seed for verification samples")

    p_m = sub.add_parser("moments", help="moment sequence of a weight")
    add_common(p_m)
    p_m.add_argument("--count", type=int, required=True, help="number of moments m_0..m_(count-1)")
    p_m.add_argument("--method", choices=["auto", "quadrature"], default="auto")

    p_p = sub.add_parser("poly", help="degree-n polynomial solution(s)")
    add_common(p_p)
    p_p.add_argument("-n", "--degree", type=int)
    p_p.add_argument("--degrees", help="range A:B, one record per degree")
    p_p.add_argument("--variant",
                     choices=["additive", "multiplicative", "shift", "functional"],
                     default="additive")
    p_p.add_argument("--pattern", help="multiplicative support indices below n, e.g. '0,2'")
    p_p.add_argument("--enumerate", action="store_true", dest="enumerate_patterns",
                     help="try all 2^n multiplicative patterns")
    p_p.add_argument("--parity", action="store_true",
                     help="multiplicative definite-parity pattern n-2, n-4, ...")
    p_p.add_argument("--a", help="shift offset a (rational)")
    p_p.add_argument("--b", help="shift slope b (rational, nonzero)")
    p_p.add_argument("--f", help="functional argument f(x), e.g. 'x^2'")
    p_p.add_argument("--max-degree", type=int, default=10,
                     help="refuse degrees above this without a higher --precision")

    p_v = sub.add_parser("verify", help="substitute a polynomial file into an equation form")
    add_common(p_v)
    p_v.add_argument("--poly-file", required=True, help="polynomial JSON (a poly record works)")
    p_v.add_argument("--variant",
                     choices=["additive", "multiplicative", "shift", "functional", "arbitrary-f"],
                     default="additive")
    p_v.add_argument("--pattern", help="multiplicative support indices")
    p_v.add_argument("--a")
    p_v.add_argument("--b")
    p_v.add_argument("--f")
    return parser


def _rational(text, name):
    if text is None:
        raise ConfigurationError(f"missing required parameter --{name}")
    try:
        return Fraction(text)
    except ValueError:
        raise ConfigurationError(f"--{name} must be rational, got {text!r}") from None


def weight_from_args(args, context):
    chosen = [bool(args.preset), bool(args.expr), bool(args.contour)]
    if sum(chosen) != 1:
        raise ConfigurationError("choose exactly one of --preset, --expr, --contour")
    if args.contour:
        return contour_weight(args.winding)
    if args.preset:
        params = {}
        if args.preset == "laguerre":
            params["gamma"] = _rational(args.gamma, "gamma")
        elif args.preset in ("jacobi-add", "jacobi-mult"):
            params["p"] = _rational(args.p, "p")
            params["q"] = _rational(args.q, "q")
        return preset_weight(args.preset, **params)
    if not args.interval:
        raise ConfigurationError("--expr needs --interval ALPHA BETA")
    interval = Interval(args.interval[0], args.interval[1])
    return normalize(parse_weight(args.expr, interval), context)


# ---------------------------------------------------------------------------
# output


def emit(records, fmt, context, stream=None):
    stream = stream or sys.stdout
    if fmt == "json":
        for record in records:
            stream.write(json.dumps(record, separators=(", ", ": ")) + "\n")
    elif fmt == "csv":
        for line in _csv_lines(records):
            stream.write(line + "\n")
    else:
        for record in records:
            stream.write(_pretty_block(record, context) + "\n")


def _csv_lines(records):
    lines = []
    for record in records:
        if "moments" in record:
            lines.append("index,re_or_num,im_or_den,error_estimate")
            ests = record.get("error_estimates") or [None] * len(record["moments"])
            for i, (mval, e) in enumerate(zip(record["moments"], ests)):
                a, b = _scalar_cols(mval)
                lines.append(f"{i},{a},{b},{_scalar_cols(e)[0] if e else ''}")
        elif "coefficients" in record:
            lines.append("power,re_or_num,im_or_den")
            for k, c in enumerate(record["coefficients"]):
                a, b = _scalar_cols(c)
                lines.append(f"{k},{a},{b}")
        else:
            keys = sorted(record)
            lines.append(",".join(keys))
            lines.append(",".join(str(record[k]) for k in keys))
    return lines


def _scalar_cols(obj):
    if obj is None:
        return "", ""
    if "num" in obj:
        return obj["num"], obj["den"]
    return obj["re"], obj["im"]


def _pretty_block(record, context):
    lines = []
    if "moments" in record:
        lines.append(f"moments of {record['weight']} ({record['source']}):")
        for i, mval in enumerate(record["moments"]):
            lines.append(f"  m_{i} = {_pretty_scalar(mval)}")
    elif "coefficients" in record:
        lines.append(f"degree {record['degree']} on {record['weight']} [{record['variant']}]:")
        lines.append("  P(x) = " + _pretty_poly(record["coefficients"]))
        if "normalization" in record:
            lines.append(f"  G = {_pretty_scalar(record['normalization'])}")
        if "det_B" in record:
            lines.append(f"  det B = {_pretty_scalar(record['det_B'])} (valid: {record['valid']})")
        if "verification" in record:
            v = record["verification"]
            lines.append(f"  verify[{v['form']}]: pass={v['pass']} max_residual={v['max_residual']}")
    else:
        lines.append(json.dumps(record, separators=(", ", ": ")))
    return "\n".join(lines)


def _pretty_scalar(obj):
    if "num" in obj:
        return obj["num"] if obj["den"] == "1" else f"{obj['num']}/{obj['den']}"
    re, im = obj["re"], obj["im"]
    re6 = _six(re)
    if _is_zero_str(im):
        return re6
    return f"{re6} + {_six(im)}i" if not im.startswith("-") else f"{re6} - {_six(im[1:])}i"


def _six(decimal_str):
    # shorten a decimal string to ~6 significant digits for display
    from .numeric import mp_context

    mp = mp_context(30)
    return mp.nstr(mp.mpf(decimal_str), 6)


def _is_zero_str(s):
    return set(s) <= set("0.-+e")


def _pretty_poly(coeff_objs):
    parts = []
    for k in range(len(coeff_objs) - 1, -1, -1):
        c = _pretty_scalar(coeff_objs[k])
        if k == 0:
            parts.append(f"({c})")
        elif k == 1:
            parts.append(f"({c})*x")
        else:
            parts.append(f"({c})*x^{k}")
    return " + ".join(parts)


# ---------------------------------------------------------------------------
# commands


def cmd_moments(args, context) -> int:
    w = weight_from_args(args, context)
    if args.count < 1:
        raise ConfigurationError("--count must be at least 1")
    seq = moments(w, args.count, mode=args.mode, context=context, method=args.method)
    record = {
        "command": "moments",
        "weight": w.weight_id,
        "mode": args.mode,
        "precision": context.precision,
        "count": args.count,
        "source": seq.source,
        "moments": [scalar_json(v, context) for v in seq.values],
    }
    if seq.error_estimates is not None:
        record["error_estimates"] = [scalar_json(e, context) for e in seq.error_estimates]
    emit([record], args.format, context)
    return EXIT_OK


def _degree_list(args):
    if args.degrees:
        lo, _, hi = args.degrees.partition(":")
        try:
            lo_i, hi_i = int(lo), int(hi)
        except ValueError:
            raise ConfigurationError(f"--degrees expects A:B, got {args.degrees!r}") from None
        if lo_i < 0 or hi_i < lo_i:
            raise ConfigurationError(f"bad degree range {args.degrees!r}")
        return list(range(lo_i, hi_i + 1))
    if args.degree is None:
        raise ConfigurationError("give -n DEGREE or --degrees A:B")
    if args.degree < 0:
        raise ConfigurationError("degree must be nonnegative")
    return [args.degree]


def cmd_poly(args, context) -> int:
    degrees = _degree_list(args)
    nmax = max(degrees)
    if nmax > args.max_degree:
        raise ConfigurationError(
            f"degree {nmax} exceeds --max-degree {args.max_degree}; raise --precision "
            f"and --max-degree together (Hankel systems lose digits with degree)"
        )
    if args.enumerate_patterns and nmax > 12:
        raise ConfigurationError("--enumerate is capped at n <= 12 (4096 patterns)")
    w = weight_from_args(args, context)
    need = 2 * nmax + 2
    if args.variant == "functional":
        seq = None
    else:
        seq = moments(w, need, mode=args.mode, context=context)
    records = []
    for n in degrees:
        records.append(_poly_record(args, context, w, seq, n))
    emit(records, args.format, context)
    return EXIT_OK


def _poly_record(args, context, w, seq, n):
    record = {
        "command": "poly",
        "weight": w.weight_id,
        "mode": args.mode,
        "precision": context.precision,
        "degree": n,
        "variant": args.variant,
        "seed": args.seed,
    }
    if args.variant == "additive":
        P = solve_polynomial(seq, n, context=context)
        det, valid = hankel_condition(seq, n, context=context)
        record["coefficients"] = [scalar_json(c, context) for c in P.coeffs]
        record["normalization"] = scalar_json(normalization(seq, n, context=context), context)
        record["det_B"] = scalar_json(det, context)
        record["valid"] = bool(valid)
        record["verification"] = _verification_summary(P, w, Additive(), args, context, seq)
    elif args.variant == "shift":
        a = Scalar.exact(_rational(args.a, "a"))
        b = Scalar.exact(_rational(args.b, "b"))
        P = solve_linear_shift(seq, n, a, b, context=context)
        det, valid = hankel_condition(seq, n, context=context)
        record["a"] = scalar_json(a, context)
        record["b"] = scalar_json(b, context)
        record["complex_shift"] = False
        record["coefficients"] = [scalar_json(c, context) for c in P.coeffs]
        record["det_B"] = scalar_json(det, context)
        record["valid"] = bool(valid)
        record["verification"] = _verification_summary(
            P, w, LinearShift(a, b), args, context, seq
        )
    elif args.variant == "multiplicative":
        if args.enumerate_patterns:
            candidates, distinct = enumerate_multiplicative(seq, n, context=context)
            record["patterns"] = [
                {
                    "pattern": sorted(c.pattern),
                    "ok": c.succeeded,
                    **(
                        {"coefficients": [scalar_json(x, context) for x in c.polynomial.coeffs]}
                        if c.succeeded
                        else {"error": c.failure}
                    ),
                }
                for c in candidates
            ]
            record["distinct_solutions"] = distinct
            return record
        if args.parity:
            pattern = parity_pattern(n)
        elif args.pattern is not None:
            pattern = frozenset(int(t) for t in args.pattern.split(",") if t.strip() != "")
        else:
            pattern = frozenset(range(n))  # full pattern by default
        P = solve_multiplicative(seq, n, pattern, context=context)
        record["pattern"] = sorted(pattern)
        record["coefficients"] = [scalar_json(c, context) for c in P.coeffs]
        record["verification"] = _verification_summary(
            P, w, Multiplicative(pattern), args, context, seq
        )
    elif args.variant == "functional":
        if not args.f:
            raise ConfigurationError("--variant functional needs --f EXPR")
        P = solve_functional(w, args.f, n, context=context, mode=args.mode)
        record["f"] = args.f
        record["coefficients"] = [scalar_json(c, context) for c in P.coeffs]
        record["verification"] = _verification_summary(
            P, w, Functional(args.f), args, context, None
        )
    return record


def _verification_summary(P, w, form, args, context, seq):
    if w.is_contour:
        # pointwise substitution is undefined on a contour; check the linear
        # conditions of the form in force instead
        need = 2 * P.degree + 1
        m = seq if seq is not None and len(seq) >= need else contour_moments(
            w.body.winding, need, mode=args.mode, context=context
        )
        worst = None
        for k in range(P.degree + 1):
            if isinstance(form, LinearShift):
                v = shifted_inner(P, k, form.a, form.b, m)
                dev = v - Scalar.exact(1) if k == 0 else v
            elif isinstance(form, Multiplicative):
                support = form.pattern | {P.degree}
                v = inner_moment(P, k, m)
                dev = v - Scalar.exact(1) if k in support else P.coefficient(k)
            else:
                v = inner_moment(P, k, m)
                dev = v - Scalar.exact(1) if k == 0 else v
            mag = dev.magnitude()
            if worst is None or mag > worst:
                worst = mag
        mp = context.mp
        ok = worst <= mp.mpf(10) ** (10 - context.precision)
        return {
            "form": "moment-conditions",
            "max_residual": mp.nstr(mp.mpf(worst), 3),
            "pass": bool(ok),
        }
    report = verify(
        P, w, form, mode=args.mode, context=context, seed=args.seed, moment_seq=seq
    )
    return {
        "form": form.name,
        "max_residual": context.mp.nstr(
            context.mp.mpf(report.max_residual.magnitude()), 3
        ),
        "pass": bool(report.passed),
    }


def cmd_verify(args, context) -> int:
    w = weight_from_args(args, context)
    with open(args.poly_file, "r", encoding="utf-8") as fh:
        data = json.load(fh)
    coeff_objs = data["coefficients"] if isinstance(data, dict) else data
    coeffs = [scalar_from_json(c, args.mode, context) for c in coeff_objs]
    P = Polynomial(coeffs)

    if args.variant == "arbitrary-f":
        if not args.f:
            raise ConfigurationError("--variant arbitrary-f needs --f EXPR")
        report = check_arbitrary_f(P, args.f, w, context=context, mode=args.mode)
        record = {
            "command": "verify",
            "weight": w.weight_id,
            "variant": "arbitrary-f",
            "f": args.f,
            "values": [scalar_json(v, context) for v in report.values],
            "max_deviation": scalar_json(report.max_deviation, context),
            "pass": bool(report.passed),
        }
        emit([record], args.format, context)
        return EXIT_OK if report.passed else EXIT_VERIFY

    if args.variant == "additive":
        form = Additive()
    elif args.variant == "multiplicative":
        if args.pattern is None:
            pattern = frozenset(range(P.degree))  # full pattern by default
        else:
            pattern = frozenset(int(t) for t in args.pattern.split(",") if t.strip() != "")
        form = Multiplicative(pattern)
    elif args.variant == "shift":
        form = LinearShift(Scalar.exact(_rational(args.a, "a")),
                           Scalar.exact(_rational(args.b, "b")))
    else:
        if not args.f:
            raise ConfigurationError("--variant functional needs --f EXPR")
        form = Functional(args.f)

    report = verify(P, w, form, mode=args.mode, context=context, seed=args.seed)
    record = {
        "command": "verify",
        "weight": w.weight_id,
        "variant": args.variant,
        "seed": args.seed,
        "max_residual": scalar_json(report.max_residual, context),
        "quadrature_error_bound": scalar_json(report.quadrature_error_bound, context),
        "residuals": [scalar_json(r, context) for r in report.residuals],
        "pass": bool(report.passed),
    }
    if isinstance(form, LinearShift):
        record["complex_shift"] = bool(report.complex_shift)
    emit([record], args.format, context)
    return EXIT_OK if report.passed else EXIT_VERIFY


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        context = PrecisionContext(args.precision)
        if args.command == "moments":
            return cmd_moments(args, context)
        if args.command == "poly":
            return cmd_poly(args, context)
        return cmd_verify(args, context)
    except (ConfigurationError, WeightSyntaxError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERIC_ERRORS as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OrthoieqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
