import os
import sys
import unittest

import numpy as np

current_dir = os.path.dirname(os.path.abspath(__file__))
parent_dir = os.path.dirname(current_dir)
sys.path.append(parent_dir)
from src.bounds import sage_bound, sonc_bound
from src.minima import descend, local_min, project, sonc_min, sonc_min_signed
from src.orthants import SignVector
from src.polycore import parse_polynomial, relax
sys.path.append(current_dir)
from oracles import univariate_minimum

MOTZKIN = "x0^4*x1^2 + x0^2*x1^4 + 1 - 3*x0^2*x1^2"
EX31 = "x0^4 + x0^3 - x0 + 1"


class TestLocalDescent(unittest.TestCase):
    def test_quadratic(self):
        p = parse_polynomial("x0^2 - 2*x0 + 1")
        np.testing.assert_allclose(local_min(p, [0.0]), [1.0], atol=1e-6)

    def test_univariate_example(self):
        """从 x=1 出发到达 x≈0.455，函数值≈0.682"""
        p = parse_polynomial(EX31)
        result = descend(p, [1.0])
        x_star, value = univariate_minimum(p, -2.0, 2.0)
        self.assertTrue(result.converged)
        self.assertAlmostEqual(result.x[0], x_star, delta=1e-4)
        self.assertAlmostEqual(result.value, value, delta=1e-8)
        self.assertAlmostEqual(result.value, 0.682, delta=1e-3)

    def test_motzkin_from_far_start(self):
        p = parse_polynomial(MOTZKIN)
        result = descend(p, [2.0, 2.0])
        self.assertAlmostEqual(result.value, 0.0, delta=1e-6)

    def test_monotone_history(self):
        p = parse_polynomial(MOTZKIN)
        history = descend(p, [1.7, -0.4]).history
        self.assertTrue(all(b <= a for a, b in zip(history, history[1:])))

    def test_iteration_cap(self):
        p = parse_polynomial(MOTZKIN)
        result = descend(p, [2.0, 2.0], max_iter=1)
        self.assertEqual(result.iterations, 1)
        self.assertFalse(result.converged)
        self.assertLess(result.value, p.evaluate([2.0, 2.0]))

    def test_projection_onto_cone(self):
        np.testing.assert_array_equal(project(np.array([-1.0, 2.0, -3.0]), np.array([1, -1, 0])), [0.0, 0.0, -3.0])

    def test_signed_descent_stays_in_cone(self):
        """在 x <= 0 上下降，x^4 + x^3 - x + 1 在边界 x=0 处取到最小值1"""
        p = parse_polynomial(EX31)
        result = descend(p, [-1.5], signs=[-1])
        self.assertLessEqual(result.x[0], 0.0)
        self.assertAlmostEqual(result.value, 1.0, delta=1e-8)


class TestSoncMin(unittest.TestCase):
    def test_motzkin(self):
        """单电路，重心 (1,1) 已是最优点"""
        result = sonc_min(parse_polynomial(MOTZKIN))
        self.assertAlmostEqual(result.value, 0.0, delta=1e-6)
        self.assertEqual(len(result.circuit_minimizers), 1)
        np.testing.assert_allclose(result.candidate, [1.0, 1.0], atol=1e-6)
        self.assertFalse(result.fallback)

    def test_univariate_example(self):
        p = parse_polynomial(EX31)
        result = sonc_min(p)
        self.assertAlmostEqual(result.value, 0.682, delta=1e-3)
        self.assertEqual(result.value, p.evaluate(result.candidate))
        # 松弛多项式上的局部下降到达 x=1，值为0
        self.assertAlmostEqual(relax(p).evaluate(result.relaxed_candidate), 0.0, delta=1e-6)

    def test_sum_of_squares_uses_fallback(self):
        result = sonc_min(parse_polynomial("x0^2 + x1^2 + 5"))
        self.assertTrue(result.fallback)
        self.assertAlmostEqual(result.value, 5.0, delta=1e-12)

    def test_unbounded_relaxation_uses_fallback(self):
        p = parse_polynomial("x0^4 - x0^5 + 1")
        result = sonc_min(p)
        self.assertTrue(result.fallback)
        self.assertLessEqual(result.value, p.evaluate([0.0]))

    def test_circuit_polynomial_minimizer(self):
        """电路多项式的SONC-Min结果就是闭式极小点"""
        p = parse_polynomial("x0^4 + x1^4 + 2 - 4*x0*x1")
        result = sonc_min(p)
        grad = p.gradient(result.candidate)
        self.assertLessEqual(np.linalg.norm(grad), 1e-6)
        np.testing.assert_allclose(result.candidate, result.circuit_minimizers[0], atol=1e-6)

    def test_values_above_bounds(self):
        for text in (MOTZKIN, EX31, "x0^4 - 2*x0^2 + 3", "x0^4 + x1^4 + 1 - x0*x1 - x0^2*x1 - x0"):
            with self.subTest(text=text):
                p = parse_polynomial(text)
                value = sonc_min(p).value
                self.assertGreaterEqual(value, sonc_bound(p).lower_bound - 1e-6)
                self.assertGreaterEqual(value, sage_bound(p).lower_bound - 1e-6)


class TestSignedSoncMin(unittest.TestCase):
    def test_positive_orthant(self):
        result = sonc_min_signed(parse_polynomial(EX31), SignVector((1,)))
        self.assertAlmostEqual(result.value, 0.682, delta=1e-3)
        self.assertGreaterEqual(result.candidate[0], 0.0)

    def test_negative_orthant(self):
        """负半轴上最小值在边界 x=0 处，为1"""
        result = sonc_min_signed(parse_polynomial(EX31), SignVector((-1,)))
        self.assertAlmostEqual(result.value, 1.0, delta=1e-8)
        self.assertAlmostEqual(result.candidate[0], 0.0, delta=1e-8)

    def test_even_polynomial_symmetry(self):
        p = parse_polynomial(MOTZKIN)
        signed = sonc_min_signed(p, SignVector((-1, -1)))
        self.assertAlmostEqual(signed.value, sonc_min(p).value, delta=1e-9)
        np.testing.assert_allclose(signed.candidate, [-1.0, -1.0], atol=1e-6)

    def test_sign_flip_equivariance(self):
        """p(x) 在 s 上与 p(-x) 在 -s 上的结果一致"""
        p = parse_polynomial("x0^4 + x1^4 + x0^3*x1 - 2*x0*x1 + x1 + 1")
        flipped = p.substitute_signs([-1, -1])
        for signs in [(1, 1), (1, -1), (-1, 1), (-1, -1)]:
            with self.subTest(signs=signs):
                s = SignVector(signs)
                first = sonc_min_signed(p, s)
                second = sonc_min_signed(flipped, s.negated())
                self.assertAlmostEqual(first.value, second.value, delta=1e-9)

    def test_requires_fixed_sign(self):
        with self.assertRaises(ValueError):
            sonc_min_signed(parse_polynomial(EX31), SignVector((0,)))


if __name__ == '__main__':
    unittest.main()
