import math
import os
import sys
import unittest
from unittest.mock import patch

import numpy as np
from scipy.special import comb

current_dir = os.path.dirname(os.path.abspath(__file__))
parent_dir = os.path.dirname(current_dir)
sys.path.append(parent_dir)
from src.bounds import BoundResult, sonc_bound
from src.minima import sonc_min
from src.orthants import (SignVector, effective_signs, fork_bound, minimal_orthants, negative_points,
                          positive_points, relax_signed)
from src.polycore import Polynomial, classify_support, load_polynomial, parse_polynomial, relax
sys.path.append(current_dir)
from oracles import brute_force_minimal_orthants, univariate_minimum

MOTZKIN = "x0^4*x1^2 + x0^2*x1^4 + 1 - 3*x0^2*x1^2"
EX31 = "x0^4 + x0^3 - x0 + 1"
DATA_DIR = os.path.join(parent_dir, 'data', 'examples')


class TestSignVector(unittest.TestCase):
    def test_basic_properties(self):
        s = SignVector((1, 0, -1))
        self.assertEqual(s.n, 3)
        self.assertEqual(s.depth, 2)
        self.assertFalse(s.is_full)
        self.assertEqual(s.undetermined(), (1,))
        self.assertEqual(str(s), '(+,0,-)')
        self.assertEqual(s.with_sign(1, -1), SignVector((1, -1, -1)))
        self.assertEqual(SignVector.from_bits((1, 0, 0)), SignVector((-1, 1, 1)))
        self.assertEqual(SignVector.zeros(2).depth, 0)

    def test_invalid_entries(self):
        with self.assertRaises(ValueError):
            SignVector((2, 0))
        with self.assertRaises(ValueError):
            SignVector(())


class TestSignCones(unittest.TestCase):
    def setUp(self):
        self.p = parse_polynomial(EX31)

    def test_positive_points(self):
        """x^4 + x^3 - x + 1：正半轴上 -x 是负点，负半轴上 x^3 是负点"""
        self.assertEqual(positive_points(self.p, SignVector((1,))), (0, 2, 3))
        self.assertEqual(negative_points(self.p, SignVector((1,))), (1,))
        self.assertEqual(positive_points(self.p, SignVector((-1,))), (0, 1, 3))
        self.assertEqual(negative_points(self.p, SignVector((-1,))), (2,))

    def test_zero_vector_gives_monomial_squares(self):
        for text in (EX31, MOTZKIN, "x0^2*x1 - x1^4 + 3*x0^4 + 2"):
            with self.subTest(text=text):
                p = parse_polynomial(text)
                self.assertEqual(positive_points(p, SignVector.zeros(p.n)), classify_support(p).mosq)

    def test_relax_signed(self):
        self.assertEqual(relax_signed(self.p, SignVector((0,))), parse_polynomial("x0^4 - x0^3 - x0 + 1"))
        self.assertEqual(relax_signed(self.p, SignVector((0,))), relax(self.p))
        self.assertEqual(relax_signed(self.p, SignVector((-1,))), parse_polynomial("x0^4 - x0^3 + x0 + 1"))
        self.assertEqual(relax_signed(self.p, SignVector((1,))), self.p)

    def test_relax_signed_keeps_squares(self):
        p = parse_polynomial("x0^2 + x1^4 + 3")
        for signs in [(1, 1), (-1, 0), (0, -1)]:
            self.assertEqual(relax_signed(p, SignVector(signs)), p)


class TestMinimalOrthants(unittest.TestCase):
    def test_three_variable_example(self):
        """三变量11项的例子恰有三个最小卦限"""
        p = load_polynomial(os.path.join(DATA_DIR, 'ex41.txt'))
        orthants = [str(s) for _, s in minimal_orthants(p)]
        self.assertEqual(sorted(orthants), sorted(['(-,+,+)', '(-,+,-)', '(-,-,+)']))
        self.assertEqual(sorted(tuple(s) for _, s in minimal_orthants(p)), sorted(brute_force_minimal_orthants(p)))

    def test_sum_of_squares(self):
        entries = minimal_orthants(parse_polynomial("x0^2 + x1^2 + 5"))
        self.assertEqual(len(entries), 1)
        signs, orthant = entries[0]
        self.assertEqual(signs.restricted, ())
        self.assertEqual(orthant, SignVector((1, 1)))

    def test_single_odd_column(self):
        """x^2 - 2x + 1 只需要正半轴"""
        entries = minimal_orthants(parse_polynomial("x0^2 - 2*x0 + 1"))
        self.assertEqual([str(s) for _, s in entries], ['(+)'])
        self.assertEqual(entries[0][0].restricted, (1,))

    def test_even_columns_do_not_depend_on_orthant(self):
        p = parse_polynomial(MOTZKIN)
        for bits in [(0, 0), (0, 1), (1, 0), (1, 1)]:
            self.assertEqual(effective_signs(p, bits).v, (0, 1, 0, 0))

    def test_matches_brute_force_on_random_polynomials(self):
        """随机多项式上与暴力反链一致，且结果是反链、大小不超过Sperner上界"""
        rng = np.random.default_rng(11)
        for k in range(30):
            with self.subTest(k=k):
                n = int(rng.integers(1, 5))
                t = int(rng.integers(2, 9))
                A = rng.integers(0, 4, size=(n, t))
                b = rng.choice([-3.0, -1.0, 1.0, 2.0], size=t)
                p = Polynomial(A, b, n)
                entries = minimal_orthants(p)
                self.assertEqual([tuple(s) for _, s in entries], brute_force_minimal_orthants(p))

                vectors = [signs.restricted for signs, _ in entries]
                for i, u in enumerate(vectors):
                    for j, w in enumerate(vectors):
                        if i != j:
                            self.assertFalse(all(a <= c for a, c in zip(u, w)))
                t_prime = len(classify_support(p).nosq)
                self.assertLessEqual(len(entries), min(2 ** n, int(comb(t_prime, t_prime // 2))))

    def test_too_many_variables(self):
        p = parse_polynomial(" + ".join(f"x{i}^2" for i in range(16)) + " + 1")
        with self.assertRaises(ValueError):
            minimal_orthants(p)


class TestForkBound(unittest.TestCase):
    def test_sum_of_squares(self):
        result = fork_bound(parse_polynomial("x0^2 + x1^2 + 7"))
        self.assertEqual(result.lower_bound, 7.0)
        self.assertEqual(len(result.details['orthants']), 1)

    def test_motzkin(self):
        result = fork_bound(parse_polynomial(MOTZKIN))
        self.assertAlmostEqual(result.lower_bound, 0.0, delta=1e-6)
        self.assertEqual(len(result.details['orthants']), 1)

    def test_univariate_sandwich(self):
        """下界介于普通SONC下界与真实最小值之间"""
        p = parse_polynomial(EX31)
        result = fork_bound(p)
        _, minimum = univariate_minimum(p, -3.0, 3.0)
        self.assertTrue(result.optimal)
        self.assertGreaterEqual(result.lower_bound, sonc_bound(p).lower_bound - 1e-6)
        self.assertLessEqual(result.lower_bound, minimum + 1e-6)
        self.assertLessEqual(result.lower_bound, sonc_min(p).value + 1e-6)

    def test_both_methods_not_worse(self):
        p = parse_polynomial(EX31)
        both = fork_bound(p, method='both')
        self.assertGreaterEqual(both.lower_bound, fork_bound(p, method='sonc').lower_bound - 1e-6)
        self.assertAlmostEqual(both.lower_bound, 0.68207, delta=1e-4)

    def test_orthant_failure_gives_minus_infinity(self):
        p = parse_polynomial(EX31)
        failure = BoundResult('sonc', -math.inf, None, 'numerical_failure')
        with patch('src.orthants.fork.sonc_bound', return_value=failure):
            result = fork_bound(p)
        self.assertEqual(result.lower_bound, -math.inf)
        self.assertEqual(result.solver_status, 'numerical_failure')

    def test_exception_in_orthant_is_contained(self):
        p = parse_polynomial(MOTZKIN)
        with patch('src.orthants.fork.sonc_bound', side_effect=RuntimeError('boom')):
            result = fork_bound(p)
        self.assertTrue(result.failed)

    def test_unknown_method(self):
        with self.assertRaises(ValueError):
            fork_bound(parse_polynomial(EX31), method='sos')


if __name__ == '__main__':
    unittest.main()
