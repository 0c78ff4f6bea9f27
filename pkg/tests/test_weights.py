from fractions import Fraction

import mpmath
import pytest
import sympy as sp

from orthoieq import (
    ConfigurationError,
    IntegrabilityError,
    Interval,
    NormalizationError,
    Scalar,
    contour_weight,
    normalize,
    parse_weight,
    preset_weight,
    scalar_eq,
)

from conftest import ALL_PRESETS, make_weight


class TestInterval:
    def test_order_enforced(self):
        with pytest.raises(ConfigurationError):
            Interval(1, 0)
        with pytest.raises(ConfigurationError):
            Interval(2, 2)

    def test_infinite_endpoints(self):
        iv = Interval(0, "inf")
        assert iv.alpha_finite and not iv.beta_finite
        iv = Interval("-inf", "inf")
        assert not iv.finite

    def test_rational_endpoints(self):
        iv = Interval("1/2", 1)
        assert iv.alpha == Fraction(1, 2)


class TestPresetValidation:
    def test_laguerre_gamma_range(self):
        with pytest.raises(ConfigurationError):
            preset_weight("laguerre", gamma="1/2")
        preset_weight("laguerre", gamma=1)  # boundary accepted

    def test_jacobi_add_ranges(self):
        with pytest.raises(ConfigurationError):
            preset_weight("jacobi-add", p=3, q=1)  # q must exceed 1
        with pytest.raises(ConfigurationError):
            preset_weight("jacobi-add", p=0, q=2)  # p - q must exceed -1

    def test_jacobi_mult_ranges(self):
        with pytest.raises(ConfigurationError):
            preset_weight("jacobi-mult", p=2, q=2)  # p - q must be positive
        with pytest.raises(ConfigurationError):
            preset_weight("jacobi-mult", p=2, q=0)

    def test_unknown_preset_name(self):
        with pytest.raises(ConfigurationError):
            preset_weight("hermite")


class TestNormalization:
    def test_laguerre_gamma1_divisor_is_one(self):
        w = preset_weight("laguerre", gamma=1)
        assert w.normalization == Scalar.exact(1)

    def test_laguerre_gamma2_divisor_is_gamma_of_2(self):
        # oracle: integral of x e^-x over (0, inf) is Gamma(2) = 1
        mpmath.mp.dps = 30
        oracle = mpmath.quad(lambda t: t * mpmath.exp(-t), [0, mpmath.inf])
        assert abs(oracle - 1) < mpmath.mpf(10) ** -25
        w = preset_weight("laguerre", gamma=2)
        assert w.normalization == Scalar.exact(1)

    def test_chebyshev_add_divisor_is_half_pi(self):
        # oracle: Beta(1/2, 3/2) by direct Beta evaluation
        mpmath.mp.dps = 30
        oracle = mpmath.beta(mpmath.mpf(1) / 2, mpmath.mpf(3) / 2)
        assert abs(oracle - mpmath.pi / 2) < mpmath.mpf(10) ** -25
        w = preset_weight("chebyshev-u2-add")
        assert w.normalization == Scalar.exact(sp.pi / 2)

    @pytest.mark.parametrize("name,params", ALL_PRESETS)
    def test_float_quadrature_agrees_with_exact_divisor(self, name, params, ctx50):
        # integrate the raw body numerically and compare with the closed form
        w = make_weight(name, params)
        raw = parse_weight(w.body.raw_text(), w.interval)
        raw = normalize(raw, ctx50)
        exact_div = Scalar.exact(w.body.divisor()).to_float(ctx50)
        assert scalar_eq(raw.normalization, exact_div, tol=Fraction(1, 10**45))

    def test_already_normalized_is_identity(self, ctx50):
        w = preset_weight("laguerre", gamma=1)
        assert normalize(w, ctx50) is w


class TestParseWeight:
    def test_exp_weight(self):
        w = parse_weight("exp(-x)", Interval(0, "inf"))
        assert w.endpoint_exponents == (0, 0)
        assert not w.is_normalized

    def test_chebyshev_exponents(self):
        w = parse_weight("(1-x)^(1/2)*x^(-1/2)", Interval(0, 1))
        assert w.endpoint_exponents == (Fraction(-1, 2), Fraction(1, 2))

    def test_syntax_error_offset(self):
        from orthoieq import WeightSyntaxError

        with pytest.raises(WeightSyntaxError) as err:
            parse_weight("x^^2", Interval(0, 1))
        assert err.value.position == 3

    def test_detectably_non_integrable(self):
        with pytest.raises(IntegrabilityError):
            parse_weight("x^(-3/2)", Interval(0, 1))
        with pytest.raises(IntegrabilityError):
            parse_weight("1/(1-x)", Interval(0, 1))

    def test_divergent_on_infinite_interval(self, ctx50):
        # constant mass on (0, inf) has no finite integral
        w = parse_weight("2", Interval(0, "inf"))
        with pytest.raises(IntegrabilityError):
            normalize(w, ctx50)

    def test_zero_integral(self, ctx50):
        w = parse_weight("sin(x)", Interval(-2, 2))
        with pytest.raises(NormalizationError):
            normalize(w, ctx50)

    def test_normalized_expression_integrates_to_one(self, ctx50):
        from orthoieq import moments

        w = normalize(parse_weight("exp(-x)*(1+x)", Interval(0, "inf")), ctx50)
        m = moments(w, 1, context=ctx50)
        assert scalar_eq(m[0], Scalar.exact(1), tol=Fraction(1, 10**40))


class TestContour:
    def test_winding_validation(self):
        with pytest.raises(ConfigurationError):
            contour_weight(-1)

    def test_normalizing_constant(self):
        w = contour_weight(0)
        assert w.normalization == Scalar.exact(sp.I * sp.pi)
        w2 = contour_weight(2)
        assert w2.normalization == Scalar.exact(5 * sp.I * sp.pi)

    def test_not_pointwise_evaluable(self):
        with pytest.raises(ConfigurationError):
            contour_weight(0).expression()
