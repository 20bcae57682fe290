import math
import random
from fractions import Fraction

import pytest

from qkelly.geometry import monomial_value
from qkelly.model import enumerate_counts
from qkelly.shadow import (
    kelly_point,
    kelly_value,
    shadow_point,
    shadow_solution,
    shadow_value,
)


def random_simplex_point(q, rng):
    raw = [rng.uniform(0.0, 1.0) for _ in q]
    total = sum(float(qi) * r for qi, r in zip(q, raw))
    return tuple(r / total for r in raw)


class TestShadowPoint:
    def test_binary_example(self):
        assert shadow_point((2, 1), 3, (1, 1)) == (Fraction(2, 3), Fraction(1, 3))

    def test_ternary_example(self):
        q = (Fraction(1, 3),) * 3
        assert shadow_point((1, 1, 0), 2, q) == (Fraction(3, 2), Fraction(3, 2), Fraction(0))

    def test_all_mass_on_one_state(self):
        assert shadow_point((4, 0), 4, (Fraction(2), Fraction(1))) == (Fraction(1, 2), Fraction(0))

    def test_budget_exact(self):
        rng = random.Random(2)
        for _ in range(40):
            m = rng.randint(2, 4)
            n = rng.randint(1, 5)
            q = tuple(Fraction(rng.randint(1, 5), rng.randint(1, 5)) for _ in range(m))
            counts = enumerate_counts(m, n)
            k = counts[rng.randrange(len(counts))]
            W = shadow_point(k, n, q)
            assert sum(qi * wi for qi, wi in zip(q, W)) == 1

    def test_rejects_bad_count(self):
        with pytest.raises(ValueError):
            shadow_point((2, 2), 3, (1, 1))


class TestShadowValue:
    def test_binary_example(self):
        assert shadow_value((2, 1), 3, (1, 1)) == Fraction(4, 27)

    def test_ternary_example(self):
        assert shadow_value((1, 1, 0), 2, (Fraction(1, 3),) * 3) == Fraction(9, 4)

    def test_vertex_value(self):
        assert shadow_value((3, 0), 3, (1, 1)) == 1

    def test_log_space_float_path_matches_exact(self):
        k, n = (7, 5, 3), 15
        q = (0.5, 1.25, 2.0)
        exact = shadow_value(k, n, tuple(Fraction(x) for x in q))
        assert abs(shadow_value(k, n, q) - float(exact)) < 1e-12 * float(exact)

    def test_value_is_monomial_at_point(self):
        sol = shadow_solution((2, 1, 1), 4, (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4)))
        assert sol.value == monomial_value(sol.point, sol.k)
        assert sol.shadow_law == (Fraction(1, 2), Fraction(1, 4), Fraction(1, 4))


class TestKelly:
    def test_ternary_point(self):
        p = (Fraction(3, 5), Fraction(3, 10), Fraction(1, 10))
        q = (Fraction(1, 3),) * 3
        assert kelly_point(p, q) == (Fraction(9, 5), Fraction(9, 10), Fraction(3, 10))

    def test_binary_point(self):
        assert kelly_point((Fraction(3, 5), Fraction(2, 5)), (1, 1)) == (
            Fraction(3, 5),
            Fraction(2, 5),
        )

    def test_binary_growth_rate(self):
        # direct formula evaluation: 0.6 log 0.6 + 0.4 log 0.4
        want = 0.6 * math.log(0.6) + 0.4 * math.log(0.4)
        got = kelly_value((Fraction(3, 5), Fraction(2, 5)), (1, 1))
        assert abs(got - want) < 1e-14
        assert abs(got + 0.6730116670092565) < 1e-12


class TestAmGmOptimality:
    @pytest.mark.parametrize("m,n", [(2, 4), (3, 3), (4, 2)])
    def test_shadow_value_dominates_monomials(self, m, n):
        rng = random.Random(m * 10 + n)
        q = tuple(rng.uniform(0.25, 2.0) for _ in range(m))
        for k in enumerate_counts(m, n):
            cap = shadow_value(k, n, q)
            point = shadow_point(k, n, q)
            for _ in range(200):
                W = random_simplex_point(q, rng)
                val = monomial_value(W, k)
                assert val <= cap * (1 + 1e-12)
                if abs(val - cap) <= 1e-12 * cap:
                    assert max(abs(a - b) for a, b in zip(W, point)) < 1e-5

    def test_shadow_law_identity(self):
        # maximizing W^k is one-period Kelly under the law k/n
        rng = random.Random(77)
        for _ in range(30):
            m = rng.randint(2, 4)
            n = rng.randint(1, 5)
            q = tuple(Fraction(rng.randint(1, 4), rng.randint(1, 4)) for _ in range(m))
            counts = [k for k in enumerate_counts(m, n) if all(ki > 0 for ki in k)]
            if not counts:
                continue
            k = counts[rng.randrange(len(counts))]
            law = tuple(Fraction(ki, n) for ki in k)
            assert shadow_point(k, n, q) == kelly_point(law, q)
