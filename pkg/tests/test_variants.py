from fractions import Fraction

import mpmath
import pytest

from orthoieq import (
    Additive,
    ArbitraryF,
    ConfigurationError,
    Functional,
    LinearShift,
    MomentSequence,
    Multiplicative,
    Polynomial,
    Scalar,
    check_arbitrary_f,
    check_functional_orthogonality,
    contour_weight,
    enumerate_multiplicative,
    inner_moment,
    moments,
    orthogonality,
    parity_measure_moments,
    parity_pattern,
    preset_weight,
    solve_functional,
    solve_linear_shift,
    solve_multiplicative,
    solve_polynomial,
    verify,
)

TOL35 = Fraction(1, 10**35)
TOL30 = Fraction(1, 10**30)


def uniform01_moments(count):
    # w = 1 on (0, 1): m_n = 1/(n+1)
    return MomentSequence.from_values([Fraction(1, k + 1) for k in range(count)])


def uniform01_weight():
    # the same weight as a preset: (1-x)^0 x^0 under jacobi-mult(2, 1)
    return preset_weight("jacobi-mult", p=2, q=1)


class TestVerifyAdditive:
    def test_laguerre_p1_exact_residual_zero(self):
        w = preset_weight("laguerre", gamma=1)
        m = moments(w, 4, mode="exact")
        P1 = solve_polynomial(m, 1)
        report = verify(P1, w, Additive(), mode="exact")
        assert report.passed
        assert report.max_residual.is_zero()
        assert len(report.sample_points) == 7

    def test_laguerre_p1_float(self, ctx50):
        w = preset_weight("laguerre", gamma=1)
        m = moments(w, 4, mode="float", context=ctx50)
        P1 = solve_polynomial(m, 1, context=ctx50)
        report = verify(P1, w, Additive(), mode="float", context=ctx50)
        assert report.passed
        assert report.max_residual.value <= ctx50.mp.mpf(10) ** -35

    def test_hand_built_p1_on_given_samples(self):
        # expand (2-y)(2-x-y) and contract against factorials by hand:
        # <(2-y)(2-y-x)> = <4 - 4y + y^2> - x<2 - y> = (4-4+2) - x(2-1) = 2 - x
        w = preset_weight("laguerre", gamma=1)
        samples = [Scalar.exact(v) for v in (0, 1, 5)]
        report = verify(Polynomial([2, -1]), w, Additive(), samples, mode="exact")
        assert report.passed and all(r.is_zero() for r in report.residuals)

    def test_perturbed_polynomial_fails(self, ctx50):
        w = preset_weight("laguerre", gamma=1)
        bad = Polynomial([Fraction(201, 100), -1])
        report = verify(bad, w, Additive(), mode="float", context=ctx50)
        assert not report.passed
        assert report.max_residual.value > ctx50.mp.mpf(10) ** -10

    def test_contour_weight_rejected(self, ctx50):
        with pytest.raises(ConfigurationError):
            verify(Polynomial([1]), contour_weight(0), Additive(), context=ctx50)

    def test_constant_solution_any_weight(self):
        for name, params in [("chebyshev-u2-mult", {}), ("uniform-symmetric", {})]:
            w = preset_weight(name, **params)
            report = verify(Polynomial([1]), w, Additive(), mode="exact")
            assert report.passed


class TestMultiplicative:
    def test_full_pattern_on_uniform01(self):
        # hand solve: a + b/2 = 1, a/2 + b/3 = 1 gives (a, b) = (-2, 6)
        m = uniform01_moments(5)
        P = solve_multiplicative(m, 1, {0})
        assert [c.as_fraction() for c in P.coeffs] == [-2, 6]

    def test_sparse_pattern_on_uniform01(self):
        # only a_1 nonzero: b m_2 = 1 with m_2 = 1/3 gives 3x (direct check:
        # integral of (3y)(3xy) dy over (0,1) is 3x, while 2x would need m_1)
        m = uniform01_moments(5)
        P = solve_multiplicative(m, 1, set())
        assert [c.as_fraction() for c in P.coeffs] == [0, 3]

    def test_sparse_pattern_on_uniform_symmetric(self):
        # b m_2 = 1 with m_2 = 1/3
        w = preset_weight("uniform-symmetric")
        m = moments(w, 5, mode="exact")
        P = solve_multiplicative(m, 1, set())
        assert [c.as_fraction() for c in P.coeffs] == [0, 3]

    def test_degree_zero_any_pattern(self):
        m = uniform01_moments(3)
        assert solve_multiplicative(m, 0, set()) == Polynomial([1])

    def test_verify_multiplicative_solutions(self):
        w = uniform01_weight()
        m = moments(w, 5, mode="exact")
        for pattern in (set(), {0}):
            P = solve_multiplicative(m, 1, pattern)
            report = verify(P, w, Multiplicative(frozenset(pattern)), mode="exact")
            assert report.passed and report.max_residual.is_zero()

    def test_verify_sparse_on_given_samples(self):
        w = preset_weight("uniform-symmetric")
        m = moments(w, 5, mode="exact")
        P = solve_multiplicative(m, 1, set())
        samples = [Scalar.exact(v) for v in (-1, 0, 2)]
        report = verify(P, w, Multiplicative(frozenset()), samples, mode="exact")
        assert report.passed and all(r.is_zero() for r in report.residuals)

    def test_enumerate_n1(self):
        m = uniform01_moments(5)
        candidates, distinct = enumerate_multiplicative(m, 1)
        assert len(candidates) == 2
        assert all(c.succeeded for c in candidates)
        polys = {tuple(x.as_fraction() for x in c.polynomial.coeffs) for c in candidates}
        assert polys == {(0, 3), (-2, 6)}
        assert distinct == 2

    def test_enumerate_n3_has_8_patterns(self):
        m = uniform01_moments(9)
        candidates, _ = enumerate_multiplicative(m, 3)
        assert len(candidates) == 8
        assert {frozenset(c.pattern) for c in candidates} == {
            frozenset(s)
            for s in ([], [0], [1], [2], [0, 1], [0, 2], [1, 2], [0, 1, 2])
        }

    def test_full_pattern_orthogonal_under_one_minus_x(self):
        # <(1-x) P_n P_m> = 0 for m < n, full patterns
        for name, params in [
            ("jacobi-mult", {"p": 3, "q": 2}),
            ("chebyshev-u2-mult", {}),
            ("jacobi-mult", {"p": 2, "q": 1}),
        ]:
            w = preset_weight(name, **params)
            m = moments(w, 15, mode="exact")
            polys = [solve_multiplicative(m, n, set(range(n))) for n in range(5)]
            for n in range(5):
                for k in range(n):
                    prod = polys[n] * polys[k]
                    val = inner_moment(prod, 0, m) - inner_moment(prod, 1, m)
                    assert val.is_zero()


class TestParity:
    def test_odd_measure_moments_vanish_exactly(self):
        m = uniform01_moments(9)
        mu = parity_measure_moments(m, 5)
        for n in (1, 3, 5):
            assert mu[n].is_zero()

    def test_uniform_symmetric_values(self):
        # mu_0 = 1 - 1/3 = 2/3 and mu_2 = 1/3 - 1/5 = 2/15 by direct substitution
        w = preset_weight("uniform-symmetric")
        m = moments(w, 9, mode="exact")
        mu = parity_measure_moments(m, 4)
        assert mu[0].as_fraction() == Fraction(2, 3)
        assert mu[2].as_fraction() == Fraction(2, 15)

    def test_parity_solutions_alternate(self):
        w = preset_weight("uniform-symmetric")
        m = moments(w, 15, mode="exact")
        for n in range(7):
            P = solve_multiplicative(m, n, parity_pattern(n))
            for k in range(n + 1):
                if (n - k) % 2 == 1:
                    assert P.coefficient(k).is_zero()
                else:
                    assert not P.coefficient(k).is_zero()

    def test_parity_solutions_orthogonal_under_mu(self):
        # <P_n P_m>_mu = 0 for m < n, where mu are the parity-measure moments
        w = preset_weight("uniform-symmetric")
        m = moments(w, 17, mode="exact")
        mu = parity_measure_moments(m, 14)
        polys = [solve_multiplicative(m, n, parity_pattern(n)) for n in range(7)]
        for n in range(7):
            for k in range(n):
                prod = polys[n] * polys[k]
                acc = Scalar.exact(0)
                for j, c in enumerate(prod.coeffs):
                    acc = acc + c * mu[j]
                assert acc.is_zero()

    def test_hand_solved_degree_2(self):
        # support {0, 2}: a + b/3 = 1, a/3 + b/5 = 1 gives (-3/2, 15/2)
        w = preset_weight("uniform-symmetric")
        m = moments(w, 5, mode="exact")
        P = solve_multiplicative(m, 2, parity_pattern(2))
        assert [c.as_fraction() for c in P.coeffs] == [
            Fraction(-3, 2),
            0,
            Fraction(15, 2),
        ]


class TestLinearShift:
    def test_zero_shift_equals_base_solver(self):
        w = preset_weight("laguerre", gamma=2)
        m = moments(w, 13, mode="exact")
        for n in range(5):
            assert solve_linear_shift(m, n, 0, 1) == solve_polynomial(m, n)

    def test_slope_invariance(self):
        # <(b x)^k P> = delta scales each equation but not the solution
        w = preset_weight("jacobi-add", p=3, q=2)
        m = moments(w, 11, mode="exact")
        for n in range(4):
            base = solve_linear_shift(m, n, 0, 1)
            for b in (2, Fraction(-1, 3), 7):
                assert solve_linear_shift(m, n, 0, b) == base

    def test_one_minus_x_recovers_multiplicative(self):
        m = uniform01_moments(13)
        for n in range(1, 6):
            shifted = solve_linear_shift(m, n, 1, -1)
            full = solve_multiplicative(m, n, set(range(n)))
            assert shifted == full

    def test_b_zero_rejected(self):
        m = uniform01_moments(5)
        with pytest.raises(ConfigurationError):
            solve_linear_shift(m, 1, 1, 0)
        with pytest.raises(ConfigurationError):
            LinearShift(Scalar.exact(1), Scalar.exact(0))

    def test_complex_shift_accepted_and_flagged(self, ctx50):
        import sympy as sp

        w = preset_weight("laguerre", gamma=1)
        m = moments(w, 5, mode="exact")
        a = Scalar.exact(1 + sp.I)
        P = solve_linear_shift(m, 1, a, 1)
        form = LinearShift(a, Scalar.exact(1))
        assert form.complex_shift
        report = verify(P, w, form, mode="exact")
        assert report.complex_shift
        assert report.passed

    def test_verify_shift_exact(self):
        m = uniform01_moments(9)
        w = uniform01_weight()
        P = solve_linear_shift(m, 2, 1, -1)
        report = verify(P, w, LinearShift(Scalar.exact(1), Scalar.exact(-1)), mode="exact")
        assert report.passed and report.max_residual.is_zero()


class TestFunctional:
    def test_identity_reduces_to_base(self, ctx50):
        w = preset_weight("laguerre", gamma=1)
        m = moments(w, 7, mode="exact")
        P = solve_functional(w, "x", 2, context=ctx50, mode="exact")
        assert P == solve_polynomial(m, 2)

    def test_x_squared_on_exponential(self):
        # hand solve: a + b = 1, 2a + 6b = 0 gives (3/2, -1/2)
        w = preset_weight("laguerre", gamma=1)
        P = solve_functional(w, "x^2", 1)
        assert [c.as_fraction() for c in P.coeffs] == [Fraction(3, 2), Fraction(-1, 2)]

    def test_degree_zero(self):
        w = preset_weight("laguerre", gamma=1)
        assert solve_functional(w, "x^2", 0) == Polynomial([1])

    def test_sqrt_argument_by_hand(self, ctx50):
        # f = sqrt(x) on e^-x: a + b = 1, a Gamma(3/2) + b Gamma(5/2) = 0
        # gives a = 3, b = -2
        w = preset_weight("laguerre", gamma=1)
        P = solve_functional(w, "sqrt(x)", 1, context=ctx50)
        mp = ctx50.mp
        assert abs(P.coeffs[0].value - 3) < mp.mpf(10) ** -40
        assert abs(P.coeffs[1].value + 2) < mp.mpf(10) ** -40

    def test_verify_functional_polynomial_f(self, ctx50):
        w = preset_weight("laguerre", gamma=1)
        P = solve_functional(w, "x^2", 1)
        report = verify(P, w, Functional("x^2"), mode="exact")
        assert report.passed and report.max_residual.is_zero()

    def test_verify_functional_sqrt(self, ctx50):
        w = preset_weight("laguerre", gamma=1)
        P = solve_functional(w, "sqrt(x)", 1, context=ctx50)
        report = verify(P, w, Functional("sqrt(x)"), context=ctx50)
        assert report.passed

    def test_orthogonality_m0(self):
        # <x^2 (3-x)/2> = (3*2 - 6)/2 = 0
        w = preset_weight("laguerre", gamma=1)
        Pn = solve_functional(w, "x^2", 1)
        P0 = Polynomial([1])
        val = check_functional_orthogonality(Pn, P0, w, "x^2")
        assert val.is_zero()

    def test_orthogonality_reduces_for_identity(self, ctx50):
        w = preset_weight("laguerre", gamma=1)
        m = moments(w, 9, mode="exact")
        P2 = solve_polynomial(m, 2)
        P1 = solve_polynomial(m, 1)
        via_f = check_functional_orthogonality(P2, P1, w, "x")
        direct = orthogonality(P2, P1, m)
        assert via_f == direct

    def test_degree_order_enforced(self):
        w = preset_weight("laguerre", gamma=1)
        P = Polynomial([1])
        with pytest.raises(ConfigurationError):
            check_functional_orthogonality(P, P, w, "x^2")


class TestArbitraryF:
    def test_identity_on_solver_output_passes(self):
        w = preset_weight("laguerre", gamma=1)
        m = moments(w, 7, mode="exact")
        P = solve_polynomial(m, 2)
        report = check_arbitrary_f(P, "x", w, mode="exact")
        assert report.passed and report.max_deviation.is_zero()

    def test_unnormalized_monomial_reported_as_failure(self):
        # P = x on e^-x: <P> = m_1 = 1 holds but <x P> = m_2 = 2
        w = preset_weight("laguerre", gamma=1)
        report = check_arbitrary_f(Polynomial([0, 1]), "x", w, mode="exact")
        assert not report.passed
        assert report.values[0] == Scalar.exact(1)
        assert report.values[1] == Scalar.exact(2)
        assert report.max_deviation == Scalar.exact(2)

    def test_constant_solution_with_fixed_point_f(self):
        # f(1) = 1 makes P_0 = 1 satisfy the k=0 condition
        w = preset_weight("laguerre", gamma=1)
        report = check_arbitrary_f(Polynomial([1]), "x^2", w, n=0)
        assert report.passed

    def test_transcendental_f_against_direct_quadrature(self, ctx50):
        # oracle: <exp(2-x) x^k> over e^-x via direct mpmath.quad
        mpmath.mp.dps = 60
        oracle = [
            mpmath.quad(
                lambda t, _k=k: t**_k * mpmath.exp(-t) * mpmath.exp(2 - t),
                [0, mpmath.inf],
            )
            for k in range(2)
        ]
        w = preset_weight("laguerre", gamma=1)
        P = Polynomial([2, -1])  # f(P(x)) = exp(2 - x)
        report = check_arbitrary_f(P, "exp(x)", w, n=1, context=ctx50)
        mp = ctx50.mp
        for got, want in zip(report.values, oracle):
            assert abs(got.value - mp.convert(want)) < mp.mpf(10) ** -40

    def test_verify_arbitrary_f_form_constant(self):
        # P_0 = 1 with identity f: rhs = <1 * 1> = 1
        w = preset_weight("uniform-symmetric")
        report = verify(Polynomial([1]), w, ArbitraryF("x"), mode="exact")
        assert report.passed


class TestShiftDegeneracyOnSignedMeasure:
    def test_laguerre_shift_one_minus_one_degenerates_with_multiplicative(self):
        # on e^-x the measure (1-x) w changes sign, and both the shift(1,-1)
        # system and the full multiplicative pattern collapse together:
        # <(1-x) P> = -a_1 forces a_1 = 0
        from orthoieq import DegenerateDegreeError, InconsistentPatternError

        w = preset_weight("laguerre", gamma=1)
        m = moments(w, 5, mode="exact")
        with pytest.raises(DegenerateDegreeError):
            solve_linear_shift(m, 1, 1, -1)
        with pytest.raises(InconsistentPatternError):
            solve_multiplicative(m, 1, {0})
