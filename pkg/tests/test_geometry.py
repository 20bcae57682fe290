import math
import random
from fractions import Fraction

import pytest

from qkelly.geometry import (
    budget_residual,
    from_ratio,
    monomial_value,
    pair_sign_at,
    support_of,
    to_ratio,
)

Q3 = (Fraction(1, 3), Fraction(1, 3), Fraction(1, 3))


class TestSupportOf:
    def test_face_point(self):
        assert support_of((1.5, 1.5, 0.0), (1 / 3, 1 / 3, 1 / 3)) == (0, 1)

    def test_interior(self):
        assert support_of((0.5, 0.3, 0.2), (1, 1, 1)) == (0, 1, 2)

    def test_vertex(self):
        assert support_of((Fraction(0), Fraction(0), Fraction(3)), Q3) == (2,)

    def test_float_threshold_scales_with_price(self):
        # zero threshold is 1e-12 / q_i
        assert support_of((1e-13, 1.0), (1.0, 1.0)) == (1,)
        assert support_of((1e-11, 1.0 - 1e-11), (1.0, 1.0)) == (0, 1)


class TestMonomialValue:
    def test_binary_optimum(self):
        assert monomial_value((Fraction(2, 3), Fraction(1, 3)), (2, 1)) == Fraction(4, 27)

    def test_ternary_tie_point(self):
        assert monomial_value((1.5, 1.5, 0.0), (1, 1, 0)) == 2.25

    def test_zero_coordinate_with_positive_exponent(self):
        assert monomial_value((1.5, 1.5, 0.0), (1, 0, 1)) == 0.0

    def test_zero_zero_convention(self):
        # 0^0 factors contribute 1, so the all-gone coordinates drop out
        assert monomial_value((Fraction(0), Fraction(1)), (0, 3)) == 1
        assert monomial_value((0.0, 1.0), (0, 0)) == 1


class TestRatioChart:
    def test_to_ratio_tie(self):
        S, z = to_ratio((1.5, 1.5, 0.0), Q3)
        assert S == (0, 1)
        assert z == (0.0,)

    def test_to_ratio_binary(self):
        S, z = to_ratio((Fraction(2, 3), Fraction(1, 3)), (1, 1))
        assert S == (0, 1)
        assert abs(z[0] - math.log(0.5)) < 1e-14

    def test_to_ratio_kelly(self):
        S, z = to_ratio((1.8, 0.9, 0.3), Q3)
        assert S == (0, 1, 2)
        assert abs(z[0] - math.log(1 / 2)) < 1e-12
        assert abs(z[1] - math.log(1 / 6)) < 1e-12

    def test_from_ratio_symmetric(self):
        W = from_ratio((0, 1), (0,), (1, 1), 2)
        assert W == (Fraction(1, 2), Fraction(1, 2))

    def test_from_ratio_ternary_tie_exact(self):
        W = from_ratio((0, 1), (Fraction(0),), Q3, 3)
        assert W == (Fraction(3, 2), Fraction(3, 2), Fraction(0))

    def test_round_trip(self):
        rng = random.Random(7)
        for _ in range(50):
            raw = [rng.uniform(0.05, 1.0) for _ in range(3)]
            W = tuple(3 * r / sum(raw) for r in raw)  # q = (1/3,1/3,1/3) budget
            S, z = to_ratio(W, Q3)
            back = from_ratio(S, z, Q3, 3)
            assert all(abs(a - b) < 1e-12 for a, b in zip(W, back))

    @pytest.mark.parametrize("support", [(0, 1), (0, 2), (1, 2), (0, 1, 2)])
    def test_chart_bijection_on_each_support(self, support):
        # coordinate spread capped so budget shares stay above the float zero
        # threshold 1e-12; a mixed (-20, 20) pair would drop below it
        rng = random.Random(11)
        for _ in range(40):
            z = tuple(rng.uniform(-13, 13) for _ in range(len(support) - 1))
            W = from_ratio(support, z, Q3, 3)
            assert support_of(W, Q3) == support
            S2, z2 = to_ratio(W, Q3)
            assert S2 == support
            assert all(abs(a - b) < 1e-10 for a, b in zip(z, z2))

    def test_chart_bijection_common_sign_magnitude_20(self):
        rng = random.Random(17)
        for _ in range(20):
            sign = rng.choice((-1.0, 1.0))
            z = tuple(sign * rng.uniform(10, 20) for _ in range(2))
            W = from_ratio((0, 1, 2), z, Q3, 3)
            assert support_of(W, Q3) == (0, 1, 2)
            _, z2 = to_ratio(W, Q3)
            assert all(abs(a - b) < 1e-10 for a, b in zip(z, z2))

    def test_log_monomial_decomposition(self):
        # log W^k = sum k_i z_i + n log W_r on the support face
        rng = random.Random(3)
        support = (0, 1, 2)
        for _ in range(30):
            z = tuple(rng.uniform(-5, 5) for _ in range(2))
            W = from_ratio(support, z, Q3, 3)
            for k in ((2, 0, 0), (1, 1, 0), (0, 1, 1), (1, 0, 1)):
                n = sum(k)
                lhs = math.log(monomial_value(W, k))
                rhs = sum(ki * zi for ki, zi in zip(k[1:], z)) + n * math.log(W[0])
                assert abs(lhs - rhs) < 1e-10

    def test_comparison_linearity(self):
        # sign(log W^k - log W^l) = sign(sum (k_i - l_i) z_i)
        rng = random.Random(5)
        support = (0, 1, 2)
        pairs = [((2, 0, 0), (1, 1, 0)), ((1, 1, 0), (0, 2, 0)), ((0, 2, 0), (1, 0, 1))]
        for _ in range(30):
            z = tuple(rng.uniform(-4, 4) for _ in range(2))
            W = from_ratio(support, z, Q3, 3)
            for k, l in pairs:
                lin = sum((ki - li) * zi for ki, li, zi in zip(k[1:], l[1:], z))
                diff = math.log(monomial_value(W, k)) - math.log(monomial_value(W, l))
                if abs(lin) > 1e-9:
                    assert (lin > 0) == (diff > 0)


class TestBudgetResidual:
    def test_zero_on_simplex(self):
        assert budget_residual((Fraction(2, 3), Fraction(1, 3)), (1, 1)) == 0

    def test_kelly_point_on_simplex(self):
        assert abs(budget_residual((1.8, 0.9, 0.3), (1 / 3, 1 / 3, 1 / 3))) < 1e-12

    def test_off_simplex(self):
        assert budget_residual((1, 1), (1, 1)) == 1


class TestPairSignExact:
    def test_exact_matches_float(self):
        rng = random.Random(13)
        support = (0, 1, 2)
        for _ in range(40):
            num = [Fraction(rng.randint(1, 40), rng.randint(1, 40)) for _ in range(2)]
            denom = Q3[0] + sum(Q3[i + 1] * x for i, x in enumerate(num))
            W = (1 / denom, num[0] / denom, num[1] / denom)
            for d in ((1, 0), (0, 1), (1, -2), (2, -1), (1, 1)):
                exact = pair_sign_at(W, support, d)
                Wf = tuple(float(x) for x in W)
                approx = pair_sign_at(Wf, support, d)
                if approx != 0:  # float zero band is a tolerance, exact is not
                    assert exact == approx
