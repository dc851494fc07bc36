import math
from fractions import Fraction

import mpmath
import pytest

from mzvkit.compositions import BiComposition, Composition, ones
from mzvkit.core import DomainError, TPoly
from mzvkit.numerics import (
    DivergenceError,
    LaurentPoly,
    PrecisionContext,
    PrecisionError,
    bernoulli,
    eval_reg_poly,
    eval_zeta_expr,
    format_value,
    geometric_kernel,
    geometric_kernel_check,
    li_eval,
    mzv_eval,
    pole_part,
    polylog_derivative_check,
    z_directional,
    zeta_nonpos,
    zeta_pos,
)

CTX = PrecisionContext(digits=20, budget=200_000, tolerance=1e-3)
TIGHT = PrecisionContext(digits=20, budget=200_000, tolerance=1e-10)


def C(*entries):
    return Composition(tuple(entries))


class TestPrecisionContext:
    def test_invariants(self):
        with pytest.raises(DomainError):
            PrecisionContext(digits=10)
        with pytest.raises(DomainError):
            PrecisionContext(budget=10)
        with pytest.raises(DomainError):
            PrecisionContext(tolerance=0.0)


class TestZetaPos:
    def test_against_closed_forms(self):
        mp = mpmath.mp.clone()
        mp.dps = 30
        pi = mp.pi
        assert abs(zeta_pos(2, CTX) - pi**2 / 6) < 1e-19
        assert abs(zeta_pos(4, CTX) - pi**4 / 90) < 1e-19

    def test_large_argument_near_one(self):
        assert 0 < float(zeta_pos(20, CTX)) - 1 < 1e-6

    def test_guard(self):
        with pytest.raises(DomainError):
            zeta_pos(1, CTX)

    def test_more_digits(self):
        wide = PrecisionContext(digits=40, budget=200_000, tolerance=1e-3)
        mp = mpmath.mp.clone()
        mp.dps = 60
        assert abs(zeta_pos(3, wide) - mp.zeta(3)) < mpmath.mpf(10) ** -40


class TestZetaNonpos:
    def test_values(self):
        assert zeta_nonpos(0) == Fraction(-1, 2)
        assert zeta_nonpos(1) == Fraction(-1, 12)
        assert zeta_nonpos(2) == 0
        assert zeta_nonpos(3) == Fraction(1, 120)

    def test_bernoulli_convention(self):
        assert bernoulli(1) == Fraction(1, 2)
        assert bernoulli(2) == Fraction(1, 6)
        assert bernoulli(4) == Fraction(-1, 30)
        assert bernoulli(3) == 0


class TestPolylog:
    def test_geometric_case(self):
        assert li_eval(C(0), 0.5, TIGHT) == pytest.approx(1.0, abs=1e-12)

    def test_log_case(self):
        assert li_eval(C(1), 0.5, TIGHT) == pytest.approx(math.log(2), abs=1e-12)

    def test_depth_two_shuffle_square(self):
        z = 0.4
        single = li_eval(C(1), z, TIGHT)
        double = li_eval(C(1, 1), z, TIGHT)
        assert abs(double - single**2 / 2) < 1e-9
        assert double == pytest.approx(math.log(1 - z) ** 2 / 2, abs=1e-9)

    def test_negative_argument(self):
        # Li_[1](z) = -ln(1-z) also for z < 0
        assert li_eval(C(1), -0.5, TIGHT) == pytest.approx(-math.log(1.5), abs=1e-12)

    def test_zero_entry_tail(self):
        # Li_[1,0](z) = sum z^n (n-1)/n = z/(1-z) + ln(1-z)
        z = 0.5
        want = z / (1 - z) + math.log(1 - z)
        assert li_eval(C(1, 0), z, TIGHT) == pytest.approx(want, abs=1e-11)

    def test_zero(self):
        assert li_eval(C(2, 1), 0.0, TIGHT) == 0.0

    def test_guards(self):
        with pytest.raises(DomainError):
            li_eval(C(1), 1.0, TIGHT)
        with pytest.raises(DomainError):
            li_eval(C(1), -1.5, TIGHT)

    def test_precision_failure_near_one(self):
        cramped = PrecisionContext(digits=20, budget=1_000, tolerance=1e-12)
        with pytest.raises(PrecisionError):
            li_eval(C(1), 0.99999, cramped)


class TestMzv:
    def test_euler_depth_two(self):
        value, error = mzv_eval(C(2, 1), CTX)
        assert abs(value - float(zeta_pos(3, CTX))) <= error
        assert error < 1e-3

    def test_four_vs_three_one(self):
        value, error = mzv_eval(C(3, 1), CTX)
        assert abs(value - float(zeta_pos(4, CTX)) / 4) <= error

    def test_depth_one_consistency(self):
        value, error = mzv_eval(C(4), CTX)
        assert abs(value - float(zeta_pos(4, CTX))) <= max(error, 1e-12)

    def test_error_bars_honest_across_budgets(self):
        loose = PrecisionContext(digits=20, budget=4_096, tolerance=1e-2)
        tight = PrecisionContext(digits=20, budget=400_000, tolerance=1e-5)
        reference = float(zeta_pos(3, CTX))
        for ctx in (loose, CTX, tight):
            value, error = mzv_eval(C(2, 1), ctx)
            assert abs(value - reference) <= error
        v1, e1 = mzv_eval(C(2, 1), loose)
        v2, e2 = mzv_eval(C(2, 1), tight)
        assert abs(v1 - v2) <= e1 + e2

    def test_guard(self):
        with pytest.raises(DomainError):
            mzv_eval(C(1, 2), CTX)

    def test_unreachable_tolerance(self):
        cramped = PrecisionContext(digits=20, budget=1_000, tolerance=1e-9)
        with pytest.raises(PrecisionError):
            mzv_eval(C(2, 1, 1), cramped)


class TestDirectional:
    def test_geometric_kernel_value(self):
        got = z_directional(BiComposition.make([0], [1]), -1.0, TIGHT)
        assert got == pytest.approx(1 / (math.e - 1), abs=1e-10)

    def test_matches_polylog_along_first_direction(self):
        b = BiComposition.make([2, 1], [1, 0])
        got = z_directional(b, -0.7, TIGHT)
        want = li_eval(C(2, 1), math.exp(-0.7), TIGHT)
        assert abs(got - want) < 1e-9

    def test_multiplicative_over_bistuffle(self):
        from mzvkit.compositions import bistuffle

        eps = -0.5
        ctx = PrecisionContext(digits=20, budget=200_000, tolerance=1e-9)
        u = BiComposition.make([1], [1])
        v = BiComposition.make([2], [0])
        lhs = sum(float(c) * z_directional(term, eps, ctx) for term, c in bistuffle(u, v).items())
        rhs = z_directional(u, eps, ctx) * z_directional(v, eps, ctx)
        assert abs(lhs - rhs) < 1e-8

    def test_multiplicative_over_bistuffle_randomized(self):
        import random

        from mzvkit.compositions import bistuffle

        rng = random.Random(71)
        ctx = PrecisionContext(digits=20, budget=400_000, tolerance=1e-8)
        for _ in range(6):
            eps = -rng.uniform(0.4, 1.2)
            depth_u, depth_v = rng.randint(1, 2), rng.randint(1, 2)
            u = BiComposition.make(
                [rng.randint(1, 3) for _ in range(depth_u)],
                [1] + [rng.randint(0, 2) for _ in range(depth_u - 1)],
            )
            v = BiComposition.make(
                [rng.randint(2, 3)] + [rng.randint(1, 3) for _ in range(depth_v - 1)],
                [rng.randint(0, 1) for _ in range(depth_v)],
            )
            lhs = sum(
                float(c) * z_directional(term, eps, ctx) for term, c in bistuffle(u, v).items()
            )
            rhs = z_directional(u, eps, ctx) * z_directional(v, eps, ctx)
            assert abs(lhs - rhs) < 1e-7, (u, v, eps)

    def test_undamped_convergent_matches_mzv(self):
        got = z_directional(BiComposition.make([2, 1], [0, 0]), -0.5, CTX)
        value, error = mzv_eval(C(2, 1), CTX)
        assert abs(got - value) <= 2 * error

    def test_divergence_guard(self):
        with pytest.raises(DivergenceError):
            z_directional(BiComposition.make([1], [0]), -1.0, CTX)
        with pytest.raises(DivergenceError):
            z_directional(BiComposition.make([1, 2], [0, 1]), -1.0, CTX)

    def test_eps_sign_guard(self):
        with pytest.raises(DomainError):
            z_directional(BiComposition.make([0], [1]), 0.5, CTX)

    def test_negative_exponent_behind_damping(self):
        # polynomial growth below a damped level is absorbed
        got = z_directional(BiComposition.make([-1], [1]), -1.0, TIGHT)
        # sum n e^{-n} = e/(e-1)^2
        assert got == pytest.approx(math.e / (math.e - 1) ** 2, abs=1e-10)


class TestKernelSeries:
    def test_residue_and_constant(self):
        kernel = geometric_kernel(4)
        assert kernel.coeff(-1) == -1
        assert kernel.coeff(0) == Fraction(-1, 2)

    def test_identity_is_exact(self):
        for order in (0, 1, 5, 8, 12):
            assert geometric_kernel_check(order) == 0

    def test_matches_float_kernel(self):
        kernel = geometric_kernel(10)
        eps = -0.3
        series = sum(float(c) * eps**e for e, c in kernel.items())
        assert series == pytest.approx(math.exp(eps) / (1 - math.exp(eps)), abs=1e-9)


class TestPolePart:
    def test_examples(self):
        f = LaurentPoly({-2: Fraction(1), 0: Fraction(3), 1: Fraction(1)})
        assert pole_part(f) == LaurentPoly({-2: Fraction(1)})
        assert pole_part(LaurentPoly({0: Fraction(5)})) == LaurentPoly()

    def test_weight_minus_one_identity_example(self):
        f = LaurentPoly({-1: Fraction(1), 0: Fraction(1)})
        g = LaurentPoly({-1: Fraction(1), 1: Fraction(1)})
        lhs = pole_part(f) * pole_part(g)
        rhs = pole_part(f * pole_part(g)) + pole_part(pole_part(f) * g) - pole_part(f * g)
        assert lhs == rhs == LaurentPoly({-2: Fraction(1)})


class TestDerivativeIdentity:
    def test_against_closed_form(self):
        # d/deps Li_[1](e^eps) = e^eps/(1-e^eps) = Li_[0](e^eps)
        gap = polylog_derivative_check(C(0), -1.0, 1e-4, TIGHT)
        assert gap < 1e-6

    def test_depth_one(self):
        gap = polylog_derivative_check(C(1), -0.7, 1e-4, TIGHT)
        assert gap < 1e-6

    def test_second_order_in_h(self):
        coarse = polylog_derivative_check(C(1), -0.7, 2e-2, TIGHT)
        fine = polylog_derivative_check(C(1), -0.7, 1e-2, TIGHT)
        assert coarse / fine == pytest.approx(4.0, rel=0.25)

    def test_guard(self):
        with pytest.raises(DomainError):
            polylog_derivative_check(C(1), -1e-5, 1e-4, TIGHT)


class TestZetaExprEvaluation:
    def test_single_symbol(self):
        from mzvkit.regularization import ZetaExpr

        got = eval_zeta_expr(ZetaExpr.symbol(C(2)), CTX)
        assert got == pytest.approx(1.6449340668, abs=1e-9)

    def test_poly_at_t_zero(self):
        from mzvkit.regularization import ZetaExpr

        poly = TPoly({2: ZetaExpr.scalar(Fraction(1, 2)),
                      0: ZetaExpr.symbol(C(2)) * Fraction(-1, 2)})
        assert eval_reg_poly(poly, CTX, t_value=0.0) == pytest.approx(-0.8224670334, abs=1e-9)

    def test_product_monomial(self):
        from mzvkit.regularization import ZetaExpr

        square = ZetaExpr.symbol(C(2)) * ZetaExpr.symbol(C(2))
        assert eval_zeta_expr(square, CTX) == pytest.approx(2.7058080843, abs=1e-9)


def test_format_value():
    text = format_value(1.2020569031595942, 3e-11)
    assert text == "1.2020569032 ± 3e-11"
