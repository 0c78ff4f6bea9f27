"""Generalized integral equations and the substitution verifier.

Forms (kernel inside integral of w(y) P(y) ...):

    Additive            P(x + y)
    Multiplicative      P(x y), with a sparsity pattern on the coefficients
    LinearShift(a, b)   P(x + a + b y), b != 0
    Functional(f)       P(x + f(y)), f nonconstant
    ArbitraryF(f)       f[P(y)] P(x + y)  (verification only; no solver)

For Additive/LinearShift/Multiplicative the right side is a finite moment
sum (expand the kernel in y and contract), so verification is exact up to
moment error. Functional uses generalized moments; ArbitraryF integrates
f[P(y)] numerically.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb

import sympy as sp

from . import expressions as ex
from .errors import (
    ConfigurationError,
    DegenerateDegreeError,
    InconsistentPatternError,
    InsufficientMomentsError,
    SingularSystemError,
)
from .hankel import solve_polynomial
from .linalg import solve_full_pivot
from .moments import MomentSequence, generalized_moments, moments
from .numeric import PrecisionContext, Scalar, scalar_eq, tolerance
from .polynomials import (
    Polynomial,
    inner_moment,
    integral_image,
    multiplicative_image,
)
from .quadrature import integrate_expression
from .weights import Weight


# ---------------------------------------------------------------------------
# equation forms


@dataclass(frozen=True)
class Additive:
    name = "additive"


@dataclass(frozen=True)
class Multiplicative:
    """Sparsity pattern: indices k < n with a_(n,k) assumed nonzero (n is implicit)."""

    pattern: frozenset = frozenset()
    name = "multiplicative"

    def __post_init__(self):
        object.__setattr__(self, "pattern", frozenset(int(k) for k in self.pattern))
        if any(k < 0 for k in self.pattern):
            raise ConfigurationError("pattern indices must be nonnegative")


@dataclass(frozen=True)
class LinearShift:
    a: Scalar
    b: Scalar
    name = "linear-shift"

    def __post_init__(self):
        object.__setattr__(self, "a", _scalarize(self.a))
        object.__setattr__(self, "b", _scalarize(self.b))
        if self.b.is_zero():
            raise ConfigurationError("linear shift requires b != 0")

    @property
    def complex_shift(self) -> bool:
        re, im = self.a.real_imag()
        return im != 0


@dataclass(frozen=True)
class Functional:
    f: object  # expression tree or text
    name = "functional"

    def __post_init__(self):
        tree = ex.parse_expression(self.f) if isinstance(self.f, str) else self.f
        object.__setattr__(self, "f", tree)


@dataclass(frozen=True)
class ArbitraryF:
    f: object
    name = "arbitrary-f"

    def __post_init__(self):
        tree = ex.parse_expression(self.f) if isinstance(self.f, str) else self.f
        object.__setattr__(self, "f", tree)


def _scalarize(v):
    return v if isinstance(v, Scalar) else Scalar.exact(v)


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerificationReport:
    form: object
    sample_points: tuple
    residuals: tuple
    max_residual: Scalar
    quadrature_error_bound: Scalar
    passed: bool
    complex_shift: bool = field(default=False)

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        return (
            f"verify[{self.form.name}] {status}: max residual {self.max_residual} "
            f"over {len(self.sample_points)} samples"
        )


def default_samples(interval, *, seed: int = 0, mode: str = "float",
                    context: PrecisionContext | None = None):
    """7 reproducible sample points: clipped endpoints, midpoint, 4 seeded randoms."""
    lo = interval.alpha if interval.alpha_finite else None
    hi = interval.beta if interval.beta_finite else None
    if lo is None and hi is None:
        lo, hi = Fraction(-1), Fraction(1)
    elif lo is None:
        lo = Fraction(hi) - 2
    elif hi is None:
        hi = Fraction(lo) + 2
    lo, hi = Fraction(lo), Fraction(hi)
    rng = random.Random(seed)
    points = [lo, (lo + hi) / 2, hi]
    for _ in range(4):
        points.append(lo + (hi - lo) * Fraction(rng.getrandbits(48), 1 << 48))
    scalars = [Scalar.exact(pt) for pt in points]
    if mode == "float":
        context = context or PrecisionContext()
        scalars = [s.to_float(context) for s in scalars]
    return tuple(scalars)


def verify(P: Polynomial, w: Weight, form, samples=None, *, mode: str = "float",
           context: PrecisionContext | None = None, seed: int = 0,
           moment_seq: MomentSequence | None = None) -> VerificationReport:
    """Substitute P into the chosen equation form and report per-sample residuals.

    Real weights only; contour solutions are checked through the linear
    moment conditions instead of pointwise substitution.
    """
    if w.is_contour:
        raise ConfigurationError(
            "contour weights are verified via the moment conditions, not pointwise"
        )
    context = context or PrecisionContext()
    if samples is None:
        samples = default_samples(w.interval, seed=seed, mode=mode, context=context)
    n = P.degree
    qbound = Scalar.exact(0)
    complex_shift = False

    if isinstance(form, Additive):
        m = _plain_moments(w, 2 * n + 1, mode, context, moment_seq)
        rhs = integral_image(P, m)
    elif isinstance(form, LinearShift):
        complex_shift = form.complex_shift
        m = _plain_moments(w, 2 * n + 1, mode, context, moment_seq)
        rhs = integral_image(P, m, form.a, form.b)
    elif isinstance(form, Multiplicative):
        m = _plain_moments(w, 2 * n + 1, mode, context, moment_seq)
        rhs = multiplicative_image(P, m)
    elif isinstance(form, Functional):
        rhs, qbound = _functional_image(P, w, form.f, context)
    elif isinstance(form, ArbitraryF):
        rhs, qbound = _arbitrary_f_image(P, w, form.f, context)
    else:
        raise ConfigurationError(f"unknown equation form {form!r}")

    residuals = []
    for x in samples:
        diff = P.eval(x) - rhs.eval(x)
        residuals.append(_abs_scalar(diff, context))
    max_residual = residuals[0]
    for r in residuals[1:]:
        if _magnitude(r) > _magnitude(max_residual):
            max_residual = r

    if max_residual.is_exact:
        passed = max_residual.is_zero()
    else:
        mp = context.mp
        p_scale = max([mp.mpf(1)] + [P.eval(x).magnitude() for x in samples])
        threshold = max(
            10 * qbound.to_float(context).value if not qbound.is_zero() else mp.mpf(0),
            tolerance(context, 10) * p_scale,
        )
        passed = max_residual.value <= threshold
    return VerificationReport(
        form=form,
        sample_points=tuple(samples),
        residuals=tuple(residuals),
        max_residual=max_residual,
        quadrature_error_bound=qbound,
        passed=passed,
        complex_shift=complex_shift,
    )


def _plain_moments(w, count, mode, context, moment_seq):
    if moment_seq is not None and len(moment_seq) >= count:
        return moment_seq
    return moments(w, count, mode=mode, context=context)


def _abs_scalar(diff, context):
    if diff.is_exact:
        return Scalar.exact(0) if diff.is_zero() else Scalar.exact(sp.Abs(diff.value))
    return Scalar(context.mp.fabs(diff.value), context.precision)


def _magnitude(s: Scalar):
    return s.magnitude()


def _functional_image(P, w, f, context):
    n = P.degree
    gen = generalized_moments(w, f, n, n, context=context)
    coeffs = []
    for i in range(n + 1):
        acc = None
        for k in range(i, n + 1):
            inner = None
            for j, a in enumerate(P.coeffs):
                term = a * gen[k - i][j]
                inner = term if inner is None else inner + term
            term = P.coeffs[k] * Scalar.exact(comb(k, i)) * inner
            acc = term if acc is None else acc + term
        coeffs.append(acc)
    qbound = _gen_error_bound(gen, context)
    return Polynomial(coeffs, allow_zero_leading=True), qbound


def _gen_error_bound(gen, context):
    # polynomial-f contractions are exact in the moments; quadrature entries
    # carry the 10^(10-p) target as their bound
    any_float = any(not entry.is_exact for row in gen for entry in row)
    if not any_float:
        return Scalar.exact(0)
    return Scalar(tolerance(context, 10), context.precision)


def _arbitrary_f_image(P, w, f, context):
    n = P.degree
    g = _f_of_p_moments(P, w, f, n, context)
    coeffs = []
    for i in range(n + 1):
        acc = None
        for k in range(i, n + 1):
            term = P.coeffs[k] * Scalar.exact(comb(k, i)) * g[k - i]
            acc = term if acc is None else acc + term
        coeffs.append(acc)
    return Polynomial(coeffs, allow_zero_leading=True), Scalar(
        tolerance(context, 10), context.precision
    )


def _f_of_p_moments(P, w, f, kmax, context):
    """g_j = <y^j f[P(y)]> for j = 0..kmax, by quadrature."""
    tree = w.expression()
    norm = w.normalization.to_float(context).value
    target = tolerance(context, 10)
    out = []
    pf = [c.to_float(context) if c.is_exact else c for c in P.coeffs]
    for j in range(kmax + 1):
        def extra(x, _j=j):
            mp = type(x).context
            acc = mp.convert(pf[-1].value)
            for c in reversed(pf[:-1]):
                acc = acc * x + mp.convert(c.value)
            fx = ex.eval_float(f, acc, _MpHolder(mp))
            return fx * x**_j if _j else fx

        raw, _err = integrate_expression(
            tree, w.interval, context,
            endpoint_exponents=w.endpoint_exponents,
            extra=extra, target=target,
        )
        out.append(Scalar(raw.value / norm, context.precision))
    return out


class _MpHolder:
    __slots__ = ("mp",)

    def __init__(self, mp):
        self.mp = mp


# ---------------------------------------------------------------------------
# multiplicative solver


def solve_multiplicative(m, n: int, pattern, *, context: PrecisionContext | None = None) -> Polynomial:
    """Solve <x^k P> = 1 on the support pattern u {n}; other coefficients are 0.

    Raises InconsistentPatternError when a support coefficient the pattern
    declared nonzero comes back zero.
    """
    support = sorted(set(int(k) for k in pattern) | {n})
    if any(k < 0 or k > n for k in support):
        raise ConfigurationError(f"pattern {sorted(pattern)} out of range for degree {n}")
    if max(support) != n:
        raise ConfigurationError("the leading index n is always in the support")
    if len(m) < 2 * n + 1:
        raise InsufficientMomentsError(
            f"degree {n} needs m_0..m_{2 * n}, got {len(m)} moments"
        )
    matrix = [[m[k + j] for j in support] for k in support]
    one = Scalar.exact(1)
    rhs = [one for _ in support]
    solved = solve_full_pivot(matrix, rhs)
    coeffs = [Scalar.exact(0)] * (n + 1)
    for idx, k in enumerate(support):
        coeffs[k] = solved[idx]
    for k in support:
        if _coefficient_vanishes(coeffs[k], solved, context):
            raise InconsistentPatternError(
                f"pattern {sorted(set(pattern))} assumed a_{n},{k} != 0 but it solved to zero",
                index=k,
            )
    return Polynomial(coeffs)


def _coefficient_vanishes(c, solved, context):
    if c.is_exact:
        return c.is_zero()
    ctx = context or PrecisionContext(c.precision)
    scale = max([ctx.mp.mpf(1)] + [s.magnitude() for s in solved])
    return c.magnitude() <= tolerance(ctx, 15) * scale


@dataclass(frozen=True)
class MultiplicativeCandidate:
    pattern: frozenset
    polynomial: Polynomial | None
    failure: str | None

    @property
    def succeeded(self) -> bool:
        return self.polynomial is not None


def enumerate_multiplicative(m, n: int, *, context: PrecisionContext | None = None):
    """Try all 2^n sparsity patterns S subset of {0..n-1}; failures are data.

    Returns the candidate list (bitmask order) and the count of distinct
    successful polynomials.
    """
    if n < 1:
        raise ConfigurationError("enumeration needs degree n >= 1")
    candidates = []
    for mask in range(1 << n):
        pattern = frozenset(k for k in range(n) if mask >> k & 1)
        try:
            poly = solve_multiplicative(m, n, pattern, context=context)
            candidates.append(MultiplicativeCandidate(pattern, poly, None))
        except (InconsistentPatternError, SingularSystemError) as exc:
            candidates.append(MultiplicativeCandidate(pattern, None, str(exc)))
    return candidates, _distinct_count(candidates, context)


def _distinct_count(candidates, context):
    distinct = []
    for cand in candidates:
        if not cand.succeeded:
            continue
        if not any(_poly_close(cand.polynomial, q, context) for q in distinct):
            distinct.append(cand.polynomial)
    return len(distinct)


def _poly_close(P, Q, context):
    if P.degree != Q.degree:
        return False
    if all(c.is_exact for c in P.coeffs) and all(c.is_exact for c in Q.coeffs):
        return all(scalar_eq(a, b) for a, b in zip(P.coeffs, Q.coeffs))
    ctx = context or PrecisionContext(
        next(c.precision for c in P.coeffs + Q.coeffs if not c.is_exact)
    )
    tol = tolerance(ctx, 10)
    return all(scalar_eq(a, b, tol=tol) for a, b in zip(P.coeffs, Q.coeffs))


def parity_pattern(n: int) -> frozenset:
    """Support below n for a definite-parity solution: n-2, n-4, ..."""
    return frozenset(range(n - 2, -1, -2))


def parity_measure_moments(m, N: int):
    """mu_n = (1/2) <x^n - x^(n+2)> [1 + (-1)^n]; odd entries are exactly zero."""
    if len(m) < N + 3:
        raise InsufficientMomentsError(
            f"mu_0..mu_{N} needs m_0..m_{N + 2}, got {len(m)} moments"
        )
    out = []
    zero = Scalar.exact(0)
    for n in range(N + 1):
        if n % 2:
            out.append(zero if m[0].is_exact else zero.to_float(PrecisionContext(m[0].precision)))
        else:
            out.append(m[n] - m[n + 2])
    return out


# ---------------------------------------------------------------------------
# linear shift solver


def solve_linear_shift(m, n: int, a, b, *, context: PrecisionContext | None = None) -> Polynomial:
    """Solve <(a+bx)^k P> = delta_(k,0) for k = 0..n."""
    a = _scalarize(a)
    b = _scalarize(b)
    if b.is_zero():
        raise ConfigurationError("linear shift requires b != 0")
    if len(m) < 2 * n + 1:
        raise InsufficientMomentsError(
            f"degree {n} needs m_0..m_{2 * n}, got {len(m)} moments"
        )
    matrix = []
    for k in range(n + 1):
        row = []
        for j in range(n + 1):
            acc = None
            for i in range(k + 1):
                coeff = Scalar.exact(comb(k, i)) * a ** (k - i) * b**i
                term = coeff * m[i + j]
                acc = term if acc is None else acc + term
            row.append(acc)
        matrix.append(row)
    one = Scalar.exact(1)
    zero = Scalar.exact(0)
    rhs = [one if k == 0 else zero for k in range(n + 1)]
    coeffs = solve_full_pivot(matrix, rhs)
    if coeffs[-1].is_zero() or _coefficient_vanishes(coeffs[-1], coeffs, context):
        raise DegenerateDegreeError(
            f"leading coefficient vanished for shift (a={a}, b={b}) at degree {n}"
        )
    return Polynomial(coeffs)


# ---------------------------------------------------------------------------
# functional-argument solver


def solve_functional(w: Weight, f, n: int, *, context: PrecisionContext | None = None,
                     mode: str = "float") -> Polynomial:
    """Solve <f(x)^k P> = delta_(k,0) for k = 0..n via generalized moments."""
    if isinstance(f, str):
        f = ex.parse_expression(f)
    context = context or PrecisionContext()
    if ex.is_identity(f):
        m = moments(w, 2 * n + 1, mode=mode, context=context)
        return solve_polynomial(m, n, context=context)
    gen = generalized_moments(w, f, n, n, context=context)
    matrix = [[gen[k][j] for j in range(n + 1)] for k in range(n + 1)]
    one = Scalar.exact(1)
    zero = Scalar.exact(0)
    rhs = [one if k == 0 else zero for k in range(n + 1)]
    coeffs = solve_full_pivot(matrix, rhs)
    if coeffs[-1].is_zero() or _coefficient_vanishes(coeffs[-1], coeffs, context):
        raise DegenerateDegreeError(
            f"leading coefficient vanished for functional argument at degree {n}"
        )
    return Polynomial(coeffs)


def check_functional_orthogonality(Pn: Polynomial, Pm: Polynomial, w: Weight, f, *,
                                   context: PrecisionContext | None = None) -> Scalar:
    """<f(x) Pn(x) Pm(f(x))>, which vanishes for solve_functional outputs with deg Pm < deg Pn."""
    if Pm.degree >= Pn.degree:
        raise ConfigurationError(
            f"requires deg Pm < deg Pn, got {Pm.degree} >= {Pn.degree}"
        )
    if isinstance(f, str):
        f = ex.parse_expression(f)
    context = context or PrecisionContext()
    gen = generalized_moments(w, f, Pm.degree + 1, Pn.degree, context=context)
    acc = None
    for k, b in enumerate(Pm.coeffs):
        inner = None
        for j, a in enumerate(Pn.coeffs):
            term = a * gen[k + 1][j]
            inner = term if inner is None else inner + term
        term = b * inner
        acc = term if acc is None else acc + term
    return acc


# ---------------------------------------------------------------------------
# arbitrary-f checker (verification only; no solver exists for the
# nonlinear coefficient system and none is attempted)


@dataclass(frozen=True)
class ArbitraryFReport:
    values: tuple  # <x^k f[P(x)]> for k = 0..n
    deviations: tuple  # |value - delta_(k,0)|
    max_deviation: Scalar
    passed: bool

    def __str__(self):
        status = "pass" if self.passed else "FAIL"
        return f"arbitrary-f {status}: max deviation {self.max_deviation}"


def check_arbitrary_f(P: Polynomial, f, w: Weight, n: int | None = None, *,
                      context: PrecisionContext | None = None,
                      mode: str = "float") -> ArbitraryFReport:
    """Report <x^k f[P(x)]> against delta_(k,0) for k = 0..n.

    The identity f contracts exactly against plain moments; other f are
    integrated numerically.
    """
    if isinstance(f, str):
        f = ex.parse_expression(f)
    context = context or PrecisionContext()
    if n is None:
        n = P.degree
    if ex.is_identity(f):
        m = moments(w, P.degree + n + 1, mode=mode, context=context)
        values = [inner_moment(P, k, m) for k in range(n + 1)]
        qbound = Scalar.exact(0)
    else:
        values = _f_of_p_moments(P, w, f, n, context)
        qbound = Scalar(tolerance(context, 10), context.precision)
    one = Scalar.exact(1)
    deviations = []
    for k, v in enumerate(values):
        dev = v - one if k == 0 else v
        deviations.append(_abs_scalar(dev, context))
    max_dev = deviations[0]
    for d in deviations[1:]:
        if d.magnitude() > max_dev.magnitude():
            max_dev = d
    if max_dev.is_exact:
        passed = max_dev.is_zero()
    else:
        mp = context.mp
        threshold = max(
            10 * qbound.to_float(context).value if not qbound.is_zero() else mp.mpf(0),
            tolerance(context, 10),
        )
        passed = max_dev.value <= threshold
    return ArbitraryFReport(tuple(values), tuple(deviations), max_dev, passed)
