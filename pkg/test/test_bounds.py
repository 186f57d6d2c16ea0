import math
import os
import sys
import unittest
from unittest.mock import patch

import numpy as np

current_dir = os.path.dirname(os.path.abspath(__file__))
parent_dir = os.path.dirname(current_dir)
sys.path.append(parent_dir)
from src.bounds import BoundResult, sage_bound, sonc_bound, sonc_certificate_circuits
from src.circuits import circuit_number
from src.polycore import load_polynomial, parse_polynomial, relax
from src.solver import SolverSolution, SolverStatus
sys.path.append(current_dir)
from oracles import grid_minimum

MOTZKIN = "x0^4*x1^2 + x0^2*x1^4 + 1 - 3*x0^2*x1^2"
EX31 = "x0^4 + x0^3 - x0 + 1"
DATA_DIR = os.path.join(parent_dir, 'data', 'examples')


class TestSoncBound(unittest.TestCase):
    def test_motzkin(self):
        """Motzkin多项式的SONC下界为0"""
        result = sonc_bound(parse_polynomial(MOTZKIN))
        self.assertTrue(result.optimal)
        self.assertAlmostEqual(result.lower_bound, 0.0, delta=1e-6)
        self.assertEqual(result.certificate.shape, (1, 4))

    def test_univariate_relaxation(self):
        self.assertAlmostEqual(sonc_bound(parse_polynomial(EX31)).lower_bound, 0.0, delta=1e-6)

    def test_even_negative_term(self):
        """x^4 - 2x^2 + 3 的下界为2"""
        self.assertAlmostEqual(sonc_bound(parse_polynomial("x0^4 - 2*x0^2 + 3")).lower_bound, 2.0, delta=1e-6)

    def test_sum_of_squares(self):
        result = sonc_bound(parse_polynomial("x0^2 + x1^2 + 5"))
        self.assertEqual(result.lower_bound, 5.0)
        self.assertEqual(result.certificate.shape, (0, 3))

    def test_missing_constant(self):
        """没有常数项时按 b_0 = 0 处理"""
        result = sonc_bound(parse_polynomial("x0^4 + x1^4 - x0*x1"))
        self.assertTrue(result.optimal)
        self.assertLessEqual(result.lower_bound, 0.0)
        self.assertGreaterEqual(result.lower_bound, -1.0)

    def test_unbounded(self):
        result = sonc_bound(parse_polynomial("x0^2 - x0^3 + 1"))
        self.assertEqual(result.lower_bound, -math.inf)
        self.assertEqual(result.solver_status, 'unbounded')
        self.assertTrue(result.failed)

    def test_solver_failure_maps_to_minus_infinity(self):
        failure = SolverSolution(SolverStatus.NUMERICAL_FAILURE)
        with patch('src.bounds.sonc.solve_convex', return_value=failure):
            result = sonc_bound(parse_polynomial(MOTZKIN))
        self.assertEqual(result.lower_bound, -math.inf)
        self.assertEqual(result.solver_status, 'numerical_failure')

    def test_positive_domain_matches_relaxation(self):
        p = parse_polynomial(EX31)
        self.assertAlmostEqual(sonc_bound(relax(p), domain='positive').lower_bound,
                               sonc_bound(p).lower_bound, places=9)

    def test_unknown_domain(self):
        with self.assertRaises(ValueError):
            sonc_bound(parse_polynomial(EX31), domain='complex')

    def test_extended_strategy_not_worse_than_trivial(self):
        p = load_polynomial(os.path.join(DATA_DIR, 'ex41.txt'))
        result = sonc_bound(p, strategy='extended')
        self.assertTrue(result.optimal)
        self.assertLessEqual(result.lower_bound, grid_minimum(p) + 1e-6)

    def test_certificate_reassembly(self):
        """重组的电路多项式满足预算约束且各自非负"""
        p = load_polynomial(os.path.join(DATA_DIR, 'ex41.txt'))
        result = sonc_bound(p)
        pieces = sonc_certificate_circuits(result)
        self.assertEqual(len(pieces), len(result.details['covering'].circuits))

        q = result.polynomial
        total = np.zeros(q.t)
        for circuit, f in pieces:
            total += f.b
            weights = f.b[list(circuit.outer_indices)]
            theta = circuit_number(circuit, weights)
            self.assertGreaterEqual(theta, abs(f.b[circuit.inner_index]) * (1 - 1e-5))

        origin = q.origin_index
        self.assertAlmostEqual(q.constant - total[origin], result.lower_bound, delta=1e-6)
        for j in range(q.t):
            if j != origin and q.b[j] > 0:
                self.assertLessEqual(total[j], q.b[j] + 1e-6)


class TestSageBound(unittest.TestCase):
    def test_motzkin(self):
        result = sage_bound(parse_polynomial(MOTZKIN))
        self.assertTrue(result.optimal)
        self.assertAlmostEqual(result.lower_bound, 0.0, delta=1e-6)

    def test_even_negative_term(self):
        self.assertAlmostEqual(sage_bound(parse_polynomial("x0^4 - 2*x0^2 + 3")).lower_bound, 2.0, delta=1e-5)

    def test_no_negative_terms(self):
        result = sage_bound(parse_polynomial("x0^2 + 4"))
        self.assertEqual(result.lower_bound, 4.0)

    def test_unbounded(self):
        result = sage_bound(parse_polynomial("x0^2 - x0^3 + 1"))
        self.assertEqual(result.lower_bound, -math.inf)
        self.assertEqual(result.solver_status, 'unbounded')

    def test_positive_orthant_single_negative_term(self):
        """正卦限上只有一个负项时SAGE是精确的：x^4 + x^3 - x + 1 在 x >= 0 上的最小值约 0.682"""
        result = sage_bound(parse_polynomial(EX31), domain='positive')
        self.assertTrue(result.optimal)
        self.assertAlmostEqual(result.lower_bound, 0.68207, delta=1e-4)

    def test_sage_dominates_sonc(self):
        for name in ('motzkin.txt', 'ex31.txt', 'ex41.txt'):
            with self.subTest(name=name):
                p = load_polynomial(os.path.join(DATA_DIR, name))
                self.assertGreaterEqual(sage_bound(p).lower_bound, sonc_bound(p).lower_bound - 1e-4)

    def test_square_of_linear_factor(self):
        """(x-1)^2 的SAGE下界为0"""
        result = sage_bound(parse_polynomial("x0^2 - 2*x0 + 1"))
        self.assertTrue(result.optimal)
        self.assertAlmostEqual(result.lower_bound, 0.0, delta=1e-5)

    def test_univariate_relaxation(self):
        result = sage_bound(parse_polynomial(EX31))
        self.assertTrue(result.optimal)
        self.assertAlmostEqual(result.lower_bound, 0.0, delta=1e-5)

    def test_solution_within_tolerance(self):
        """最优状态下相对熵规划的各项残差不超过 2^-23"""
        for text in (MOTZKIN, EX31, "x0^2 - 2*x0 + 1"):
            with self.subTest(text=text):
                solution = sage_bound(parse_polynomial(text)).details['solution']
                self.assertTrue(solution.optimal)
                self.assertLessEqual(max(solution.stationarity, solution.primal_feasibility, solution.gap),
                                     2.0 ** -23)

    def test_certificate_feasibility(self):
        """由证书重组的AGE满足规划约束，并且在正卦限上非负"""
        rng = np.random.default_rng(5)
        for name in ('motzkin.txt', 'ex41.txt'):
            with self.subTest(name=name):
                result = sage_bound(load_polynomial(os.path.join(DATA_DIR, name)))
                self.assertTrue(result.optimal)
                q = result.polynomial
                X, nu = result.certificate['X'], result.certificate['nu']
                origin = q.origin_index
                for i, face in result.details['faces'].items():
                    face = list(face)
                    weights, coefficients = nu[i, face], X[i, face]
                    self.assertTrue(np.all(weights > 0) and np.all(coefficients > 0))
                    balance = (q.A[:, face] - q.A[:, [i]]) @ weights
                    np.testing.assert_allclose(balance, 0.0, atol=1e-6)
                    entropy = float(np.sum(weights * np.log(weights / (math.e * coefficients))))
                    self.assertLessEqual(entropy, q.b[i] + 1e-6)

                    for x in rng.lognormal(0.0, 0.5, size=(20, q.n)):
                        monomials = np.prod(x[:, None] ** q.A, axis=0)
                        value = float(coefficients @ monomials[face]) + q.b[i] * monomials[i]
                        scale = float(coefficients @ monomials[face]) + abs(q.b[i]) * monomials[i]
                        self.assertGreaterEqual(value, -1e-6 * scale)

                for j in range(q.t):
                    if j != origin and q.b[j] > 0:
                        self.assertLessEqual(float(np.sum(X[:, j])), q.b[j] + 1e-6)
                self.assertAlmostEqual(q.constant - float(np.sum(X[:, origin])), result.lower_bound, delta=1e-9)

    def test_result_dict(self):
        result = BoundResult('sonc', 1.5, solver_status='optimal', wall_time=0.25)
        self.assertEqual(result.to_dict(), {'method': 'sonc', 'lower_bound': 1.5, 'status': 'optimal',
                                            'wall_time': 0.25})
        self.assertFalse(result.failed)


class TestHomogeneity(unittest.TestCase):
    def test_scaling_scales_bounds(self):
        """p 乘以 s > 0，两种下界都乘以 s"""
        cases = [
            (MOTZKIN, 'real'),
            (EX31, 'positive'),
            ("x0^4 - 2*x0^2 + 3", 'real'),
        ]
        for text, domain in cases:
            p = parse_polynomial(text)
            for bound in (sonc_bound, sage_bound):
                with self.subTest(text=text, bound=bound.__name__):
                    base = bound(p, domain=domain)
                    scaled = bound(p.scale(2.0), domain=domain)
                    self.assertTrue(base.optimal and scaled.optimal)
                    expected = 2.0 * base.lower_bound
                    self.assertAlmostEqual(scaled.lower_bound, expected, delta=1e-6 * max(1.0, abs(expected)))


if __name__ == '__main__':
    unittest.main()
