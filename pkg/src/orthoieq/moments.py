"""Moments m_n = <x^n> of a weight, and generalized moments <f(x)^k x^j>.

Presets and contours have closed forms (exact rationals, or Gaussian
rationals over pi for contours). Expression weights are integrated
numerically with per-entry error estimates.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import sympy as sp

from . import expressions as ex
from .errors import (
    ConfigurationError,
    ConstantFunctionError,
    InsufficientMomentsError,
    ModeError,
    QuadratureError,
)
from .numeric import PrecisionContext, Scalar, scalar_eq, tolerance
from .quadrature import integrate_expression
from .weights import Contour, Weight


@dataclass(frozen=True)
class MomentSequence:
    """m_0 .. m_N with provenance. m_0 must equal 1 (the weight is normalized)."""

    values: tuple
    source: str  # analytic | quadrature | contour
    weight_id: str
    error_estimates: tuple | None = None
    winding: int | None = None

    def __post_init__(self):
        if not self.values:
            raise ConfigurationError("a moment sequence needs at least m_0")
        m0 = self.values[0]
        if m0.is_exact:
            ok = scalar_eq(m0, Scalar.exact(1))
        else:
            ok = scalar_eq(m0, Scalar.exact(1), tol=tolerance(PrecisionContext(m0.precision), 10))
        if not ok:
            raise ConfigurationError(f"m_0 must be 1 for a normalized weight, got {m0}")

    def __len__(self):
        return len(self.values)

    def __getitem__(self, n: int) -> Scalar:
        if n >= len(self.values):
            raise InsufficientMomentsError(
                f"moment m_{n} requested but only m_0..m_{len(self.values) - 1} are available"
            )
        return self.values[n]

    @staticmethod
    def from_values(values, source="analytic", weight_id="manual") -> "MomentSequence":
        vals = tuple(v if isinstance(v, Scalar) else Scalar.exact(v) for v in values)
        return MomentSequence(vals, source, weight_id)


def moments(w: Weight, count: int, *, mode: str = "float",
            context: PrecisionContext | None = None, method: str = "auto") -> MomentSequence:
    """First `count` moments of a normalized weight.

    method="auto" uses closed forms for presets/contours and quadrature for
    expression weights; method="quadrature" forces numerical integration
    (useful for cross-checks). Exact mode requires a closed form.
    """
    if count < 1:
        raise ConfigurationError("count must be at least 1 (m_0)")
    if not w.is_normalized:
        raise ConfigurationError(f"weight {w.weight_id} is not normalized")
    if mode not in ("float", "exact"):
        raise ConfigurationError(f"mode must be 'float' or 'exact', got {mode!r}")
    context = context or PrecisionContext()

    if w.is_contour:
        if method == "quadrature":
            raise ConfigurationError("contour moments have no quadrature form")
        return contour_moments(w.body.winding, count, mode=mode, context=context)

    if w.is_preset and method != "quadrature":
        exact_values = [Scalar.exact(w.body.moment(n)) for n in range(count)]
        if mode == "exact":
            values = exact_values
        else:
            values = [v.to_float(context) for v in exact_values]
        return MomentSequence(tuple(values), "analytic", w.weight_id)

    if mode == "exact":
        raise ModeError("exact moments need an analytic form; expression weights are numeric")
    return _quadrature_moments(w, count, context)


def _quadrature_moments(w: Weight, count: int, context: PrecisionContext) -> MomentSequence:
    tree = w.expression()
    norm = w.normalization.to_float(context).value
    target = tolerance(context, 10)
    values = []
    estimates = []
    worst = None
    for n in range(count):
        try:
            raw, err = integrate_expression(
                tree, w.interval, context,
                endpoint_exponents=w.endpoint_exponents,
                extra=(lambda x, _n=n: x**_n) if n else None,
                target=target,
            )
        except QuadratureError as exc:
            raise QuadratureError(
                f"moment m_{n} of {w.weight_id}: {exc}", worst_index=n
            ) from exc
        values.append(Scalar(raw.value / norm, context.precision))
        estimates.append(Scalar(err.value / abs(norm), context.precision))
        if worst is None or estimates[-1].value > estimates[worst].value:
            worst = n
    return MomentSequence(
        tuple(values), "quadrature", w.weight_id, error_estimates=tuple(estimates)
    )


def contour_moments(winding: int, count: int, *, mode: str = "float",
                    context: PrecisionContext | None = None) -> MomentSequence:
    """Closed-form moments of the winding-k contour weight 1/(c x), c = i pi (2k+1).

    m_0 = 1 and m_n = (1 - (-1)^n) / (n c) for n >= 1: the integrand of
    m_n is entire for n >= 1 so the path collapses to the real axis, and
    only the normalizing constant c remembers the winding number.
    """
    if count < 1:
        raise ConfigurationError("count must be at least 1 (m_0)")
    Contour(winding)  # validates winding >= 0
    context = context or PrecisionContext()
    c = sp.I * sp.pi * (2 * winding + 1)
    exact_values = [sp.Integer(1)]
    for n in range(1, count):
        exact_values.append(sp.expand((1 - (-1) ** n) / (n * c)))
    if mode == "exact":
        values = tuple(Scalar.exact(v) for v in exact_values)
    elif mode == "float":
        values = tuple(Scalar.exact(v).to_float(context) for v in exact_values)
    else:
        raise ConfigurationError(f"mode must be 'float' or 'exact', got {mode!r}")
    return MomentSequence(values, "contour", f"contour[k={winding}]", winding=winding)


def generalized_moments(w: Weight, f, kmax: int, jmax: int, *,
                        context: PrecisionContext | None = None,
                        plain: MomentSequence | None = None):
    """Matrix M[k][j] = <f(x)^k x^j> for k <= kmax, j <= jmax.

    Polynomial f (including the identity) contracts exactly against plain
    moments; anything else is integrated numerically per entry. Raises
    ConstantFunctionError when f is constant on the interval.
    """
    if isinstance(f, str):
        f = ex.parse_expression(f)
    context = context or PrecisionContext()
    poly = ex.as_polynomial(f)
    if poly is not None and len(poly) == 1:
        raise ConstantFunctionError(f"f = {ex.to_text(f)} is constant")

    if poly is not None:
        deg_f = len(poly) - 1
        need = deg_f * kmax + jmax + 1
        if plain is None or len(plain) < need:
            plain = moments(w, need, mode="exact" if w.is_preset else "float",
                            context=context)
        return _polynomial_generalized(poly, kmax, jmax, plain)

    _reject_constant_f(f, w, context)
    tree = w.expression()
    norm = w.normalization.to_float(context).value
    target = tolerance(context, 10)
    rows = []
    for k in range(kmax + 1):
        row = []
        for j in range(jmax + 1):
            def extra(x, _k=k, _j=j, _f=f):
                fx = ex.eval_float(_f, x, _shim(x)) if _k else 1
                return (fx**_k if _k else 1) * (x**_j if _j else 1)

            try:
                raw, err = integrate_expression(
                    tree, w.interval, context,
                    endpoint_exponents=w.endpoint_exponents,
                    extra=extra, target=target,
                )
            except QuadratureError as exc:
                raise QuadratureError(
                    f"generalized moment <f^{k} x^{j}> of {w.weight_id}: {exc}",
                    worst_index=(k, j),
                ) from exc
            row.append(Scalar(raw.value / norm, context.precision))
        rows.append(row)
    return rows


class _MpHolder:
    __slots__ = ("mp",)

    def __init__(self, mp):
        self.mp = mp


def _shim(x):
    return _MpHolder(type(x).context)


def _polynomial_generalized(poly, kmax, jmax, plain: MomentSequence):
    rows = []
    powers = [[Fraction(1)]]  # coefficients of f^k
    for _ in range(kmax):
        prev = powers[-1]
        nxt = [Fraction(0)] * (len(prev) + len(poly) - 1)
        for i, a in enumerate(prev):
            if a == 0:
                continue
            for j, b in enumerate(poly):
                nxt[i + j] += a * b
        powers.append(nxt)
    for k in range(kmax + 1):
        row = []
        for j in range(jmax + 1):
            acc = None
            for i, coeff in enumerate(powers[k]):
                if coeff == 0:
                    continue
                term = Scalar.exact(coeff) * plain[i + j]
                acc = term if acc is None else acc + term
            row.append(acc if acc is not None else Scalar.exact(0) * plain[0])
        rows.append(row)
    return rows


def _reject_constant_f(f, w, context):
    interval = w.interval
    lo = interval.alpha if interval.alpha_finite else (interval.beta - 2 if interval.beta_finite else -1)
    hi = interval.beta if interval.beta_finite else (interval.alpha + 2 if interval.alpha_finite else 1)
    mp = context.mp
    lo_f = mp.mpf(Fraction(lo).numerator) / Fraction(lo).denominator
    hi_f = mp.mpf(Fraction(hi).numerator) / Fraction(hi).denominator
    samples = []
    for i in range(1, 10):
        t = lo_f + (hi_f - lo_f) * i / 10
        samples.append(ex.eval_float(f, t, context))
    spread = max(abs(s - samples[0]) for s in samples)
    scale = max(mp.mpf(1), max(abs(s) for s in samples))
    if spread <= scale * tolerance(context, context.precision // 2):
        raise ConstantFunctionError(
            f"f = {ex.to_text(f)} is constant on {interval} to working tolerance"
        )
