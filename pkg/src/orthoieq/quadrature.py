"""Adaptive integration for weight moments.

Finite intervals go through tanh-sinh (double-exponential) quadrature.
Endpoints whose power-law exponent s is negative (known from weight
metadata) are regularized first by the substitution x = a + u^m with
m = denominator(s), which removes the singularity entirely; without it,
endpoint representation cancellation caps tanh-sinh accuracy near half
the working digits. Semi-infinite intervals are remapped by
x = a + t/(1-t); doubly infinite ones are split at 0.

Integration runs at 2p+10 digits internally and returns values at p.
Reported error estimates are floored at the cancellation limit of the
working precision, since the level-difference estimate alone cannot see
systematic endpoint error.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import IntegrabilityError, QuadratureError
from .numeric import PrecisionContext, Scalar, mp_context
from . import expressions as ex


def _working_context(p):
    return mp_context(2 * p + 10)


def _error_floor(mp, working_dps):
    return mp.mpf(10) ** (-(working_dps // 2 - 4))


def integrate(f, interval, context: PrecisionContext, *, endpoint_exponents=(0, 0),
              target=None, description="integrand"):
    """Integrate callable f (mpf -> mpf/mpc at the working context) over the interval.

    Returns (value, error_estimate) as Scalars at the context precision.
    Raises QuadratureError when the estimate misses the target, and
    IntegrabilityError when the integral looks divergent.
    """
    p = context.precision
    work = _working_context(p)
    if target is None:
        target = context.mp.mpf(10) ** (10 - p)
    pieces = _split_pieces(f, interval, endpoint_exponents, work)
    total = work.mpf(0)
    est = work.mpf(0)
    maxdegree = 8
    for g, a, b in pieces:
        try:
            value, err = work.quadts(g, [a, b], error=True, maxdegree=maxdegree)
        except (ZeroDivisionError, ValueError, OverflowError) as exc:
            raise QuadratureError(f"integration of {description} failed: {exc}") from exc
        if not work.isfinite(abs(value)):
            raise IntegrabilityError(f"integral of {description} is not finite")
        total += value
        est += abs(err)
    est = max(est, _error_floor(work, work.dps))
    mag = abs(total)
    if mag > work.mpf(10) ** min(30, p // 2):
        raise IntegrabilityError(
            f"integral of {description} appears divergent (magnitude {work.nstr(mag, 5)})"
        )
    if est > work.convert(target) * max(1, mag):
        raise QuadratureError(
            f"integration of {description} reached estimate {work.nstr(est, 3)}, "
            f"target {work.nstr(work.convert(target), 3)}",
        )
    return _round_to(total, context), _round_to(est, context)


def _round_to(value, context):
    mp = context.mp
    if hasattr(value, "imag") and value.imag != 0:
        return Scalar(mp.mpc(value.real, value.imag), context.precision)
    real = value.real if hasattr(value, "real") else value
    return Scalar(mp.mpf(real), context.precision)


def _split_pieces(f, interval, exponents, work):
    """Turn (f, interval) into finite regular pieces ready for tanh-sinh."""
    exp_a, exp_b = (Fraction(e) for e in exponents)
    if interval.alpha_finite and exp_a <= -1:
        raise IntegrabilityError(f"endpoint exponent {exp_a} at alpha is not integrable")
    if interval.beta_finite and exp_b <= -1:
        raise IntegrabilityError(f"endpoint exponent {exp_b} at beta is not integrable")

    if not interval.alpha_finite and not interval.beta_finite:
        left = _map_semi_infinite(f, work.mpf(0), work, negative=True)
        right = _map_semi_infinite(f, work.mpf(0), work, negative=False)
        return [(left, work.mpf(0), work.mpf(1)), (right, work.mpf(0), work.mpf(1))]

    if not interval.beta_finite:
        a = _to_mpf(interval.alpha, work)
        pieces = []
        if exp_a < 0:
            mid = a + 1
            pieces.extend(_finite_pieces(f, a, mid, exp_a, Fraction(0), work))
            pieces.append((_map_semi_infinite(f, mid, work, negative=False),
                           work.mpf(0), work.mpf(1)))
        else:
            pieces.append((_map_semi_infinite(f, a, work, negative=False),
                           work.mpf(0), work.mpf(1)))
        return pieces

    if not interval.alpha_finite:
        b = _to_mpf(interval.beta, work)
        pieces = []
        if exp_b < 0:
            mid = b - 1
            pieces.extend(_finite_pieces(f, mid, b, Fraction(0), exp_b, work))
            pieces.append((_map_semi_infinite(f, mid, work, negative=True),
                           work.mpf(0), work.mpf(1)))
        else:
            pieces.append((_map_semi_infinite(f, b, work, negative=True),
                           work.mpf(0), work.mpf(1)))
        return pieces

    a = _to_mpf(interval.alpha, work)
    b = _to_mpf(interval.beta, work)
    return _finite_pieces(f, a, b, exp_a, exp_b, work)


def _finite_pieces(f, a, b, exp_a, exp_b, work):
    # fractional negative exponents get the regularizing substitution; anything
    # in (-1, 0) has denominator >= 2, integers <= -1 were rejected upstream
    sing_a = exp_a < 0
    sing_b = exp_b < 0
    if sing_a and sing_b:
        mid = (a + b) / 2
        return (_finite_pieces(f, a, mid, exp_a, Fraction(0), work)
                + _finite_pieces(f, mid, b, Fraction(0), exp_b, work))
    if sing_a:
        m = max(2, exp_a.denominator)

        def g(u, _f=f, _a=a, _m=m):
            x = _a + u**_m
            if x == _a:
                # u^m rounded away against a: the tanh-sinh weight there is
                # below working resolution, so the contribution is negligible
                return 0
            return _f(x) * _m * u ** (_m - 1)

        return [(g, work.mpf(0), work.root(b - a, m))]
    if sing_b:
        m = max(2, exp_b.denominator)

        def g(u, _f=f, _b=b, _m=m):
            x = _b - u**_m
            if x == _b:
                return 0
            return _f(x) * _m * u ** (_m - 1)

        return [(g, work.mpf(0), work.root(b - a, m))]
    return [(f, a, b)]


def _map_semi_infinite(f, anchor, work, *, negative):
    # x = anchor +/- t/(1-t), t in (0,1)
    if negative:
        def g(t):
            one_minus = 1 - t
            return f(anchor - t / one_minus) / one_minus**2
    else:
        def g(t):
            one_minus = 1 - t
            return f(anchor + t / one_minus) / one_minus**2
    return g


def _to_mpf(value, work):
    if isinstance(value, Fraction):
        return work.mpf(value.numerator) / value.denominator
    return work.convert(value)


def integrate_expression(tree, interval, context, *, endpoint_exponents=(0, 0),
                         extra=None, target=None):
    """Integrate an expression tree (optionally times ``extra(x)``) over the interval."""
    work = _working_context(context.precision)

    if extra is None:
        def f(x):
            return ex.eval_float(tree, x, _CtxShim(work))
    else:
        def f(x):
            return ex.eval_float(tree, x, _CtxShim(work)) * extra(x)

    return integrate(
        f, interval, context,
        endpoint_exponents=endpoint_exponents,
        target=target,
        description=ex.to_text(tree),
    )


class _CtxShim:
    """Minimal PrecisionContext stand-in exposing .mp for expression evaluation."""

    __slots__ = ("mp",)

    def __init__(self, mp):
        self.mp = mp
