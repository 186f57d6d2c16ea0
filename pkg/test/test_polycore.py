import json
import os
import sys
import tempfile
import unittest

import numpy as np

current_dir = os.path.dirname(os.path.abspath(__file__))
parent_dir = os.path.dirname(current_dir)
sys.path.append(parent_dir)
from src.polycore import (DimensionMismatchError, Polynomial, PolynomialParseError, classify_support,
                          load_polynomial, parse_polynomial, relax, save_polynomial, serialize_polynomial)

EX31 = "x0^4 + x0^3 - x0 + 1"
MOTZKIN = "x0^4*x1^2 + x0^2*x1^4 + 1 - 3*x0^2*x1^2"


class TestParsePolynomial(unittest.TestCase):
    def test_univariate_terms(self):
        """测试单变量多项式的解析与规范顺序"""
        p = parse_polynomial(EX31)
        self.assertEqual(p.n, 1)
        self.assertEqual(p.t, 4)
        self.assertEqual([p.exponent(j) for j in range(p.t)], [(0,), (1,), (3,), (4,)])
        np.testing.assert_array_equal(p.b, [1.0, -1.0, 1.0, 1.0])
        self.assertEqual(p.origin_index, 0)

    def test_like_terms_merge(self):
        """测试同类项合并"""
        p = parse_polynomial("2*x0 - 2*x0 + 1")
        self.assertEqual(p.t, 1)
        self.assertEqual(p.exponent(0), (0,))
        self.assertEqual(p.b[0], 1.0)

    def test_support_kept_without_origin(self):
        """测试不含常数项时支撑集保持原样"""
        p = parse_polynomial("3.932*x1^8 - 1.204*x0*x1*x2^3")
        self.assertEqual(p.n, 3)
        self.assertEqual(p.t, 2)
        self.assertIsNone(p.origin_index)
        columns = {p.exponent(j): p.b[j] for j in range(p.t)}
        self.assertEqual(columns, {(0, 8, 0): 3.932, (1, 1, 3): -1.204})

    def test_full_cancellation_gives_zero_constant(self):
        p = parse_polynomial("x0 - x0")
        self.assertEqual(p.t, 1)
        self.assertEqual(p.constant, 0.0)

    def test_implicit_multiplication_and_repeated_variable(self):
        p = parse_polynomial("2 x0 x0 x1")
        self.assertEqual(p.exponent(0), (2, 1))
        self.assertEqual(p.b[0], 2.0)

    def test_scientific_coefficient(self):
        p = parse_polynomial("1.5e-3*x0^2 + 1")
        self.assertAlmostEqual(p.b[1], 1.5e-3)

    def test_errors(self):
        """测试负指数、分数指数、空输入和语法错误"""
        for text in ["x0^-1 + 1", "x0^1.5", "", "   ", "x0 + + 1", "y0 + 1", "x0^"]:
            with self.subTest(text=text):
                with self.assertRaises(PolynomialParseError):
                    parse_polynomial(text)

    def test_error_position(self):
        with self.assertRaises(PolynomialParseError) as ctx:
            parse_polynomial("x0 + 1 ) ")
        self.assertIsNotNone(ctx.exception.position)
        self.assertGreater(ctx.exception.position, 0)

    def test_serialize_round_trip(self):
        """测试序列化后再解析得到相同的多项式"""
        for text in [EX31, MOTZKIN, "-1.204*x0*x1*x2^3 + 3.932*x1^8", "7", "0.1*x0 - 1e-05*x1^3"]:
            with self.subTest(text=text):
                p = parse_polynomial(text)
                self.assertEqual(parse_polynomial(serialize_polynomial(p)), p)

    def test_json_round_trip(self):
        p = parse_polynomial(MOTZKIN)
        data = json.loads(json.dumps(p.to_json()))
        self.assertEqual(Polynomial.from_json(data), p)

    def test_load_and_save(self):
        p = parse_polynomial(MOTZKIN)
        with tempfile.TemporaryDirectory() as tmp:
            for as_json in (False, True):
                path = os.path.join(tmp, f"p_{as_json}.txt")
                save_polynomial(p, path, as_json=as_json)
                self.assertEqual(load_polynomial(path), p)

    def test_load_example_files(self):
        data_dir = os.path.join(parent_dir, 'data', 'examples')
        self.assertEqual(load_polynomial(os.path.join(data_dir, 'ex41.txt')).t, 11)
        self.assertEqual(load_polynomial(os.path.join(data_dir, 'motzkin.txt')), parse_polynomial(MOTZKIN))


class TestEvaluation(unittest.TestCase):
    def test_evaluate(self):
        p = parse_polynomial(EX31)
        self.assertEqual(p.evaluate([1.0]), 2.0)
        self.assertAlmostEqual(p.evaluate([0.4554]), 0.682, places=3)
        self.assertEqual(parse_polynomial(MOTZKIN).evaluate([1.0, 1.0]), 0.0)

    def test_evaluate_many_matches_evaluate(self):
        p = parse_polynomial(MOTZKIN)
        X = np.random.default_rng(0).uniform(-2, 2, size=(20, 2))
        np.testing.assert_allclose(p.evaluate_many(X), [p.evaluate(x) for x in X])

    def test_dimension_mismatch(self):
        p = parse_polynomial(MOTZKIN)
        with self.assertRaises(DimensionMismatchError):
            p.evaluate([1.0])
        with self.assertRaises(DimensionMismatchError):
            p.gradient([1.0, 2.0, 3.0])

    def test_gradient_examples(self):
        np.testing.assert_allclose(parse_polynomial(MOTZKIN).gradient([1.0, 1.0]), [0.0, 0.0], atol=1e-12)
        np.testing.assert_array_equal(parse_polynomial("5", n=2).gradient([0.3, -0.7]), [0.0, 0.0])
        np.testing.assert_array_equal(parse_polynomial(EX31).gradient([0.0]), [-1.0])

    def test_gradient_finite_differences(self):
        """测试梯度与中心差分一致"""
        p = parse_polynomial("3*x0^2*x1 - 2*x1^3*x2 + x0*x2^4 + 1.5*x0 - 4")
        rng = np.random.default_rng(1)
        h = 1e-6
        for _ in range(10):
            x = rng.uniform(0.2, 1.5, size=3) * rng.choice([-1, 1], size=3)
            numeric = np.array([(p.evaluate(x + h * e) - p.evaluate(x - h * e)) / (2 * h) for e in np.eye(3)])
            np.testing.assert_allclose(p.gradient(x), numeric, rtol=1e-5, atol=1e-6)


class TestClassification(unittest.TestCase):
    def test_classify_examples(self):
        c = classify_support(parse_polynomial(EX31))
        self.assertEqual(c.mosq, (0, 3))
        self.assertEqual(c.nosq, (1, 2))
        self.assertEqual(classify_support(parse_polynomial("x0^2 + x1^2 + 1")).nosq, ())
        motzkin = parse_polynomial(MOTZKIN)
        c = classify_support(motzkin)
        self.assertEqual(len(c.mosq), 3)
        self.assertEqual([motzkin.b[j] for j in c.nosq], [-3.0])

    def test_classification_is_partition(self):
        p = parse_polynomial("x0^2 - x0^2*x1^2 + x0*x1 + 3")
        c = classify_support(p)
        self.assertEqual(sorted(c.mosq + c.nosq), list(range(p.t)))
        self.assertFalse(set(c.mosq) & set(c.nosq))

    def test_relax(self):
        np.testing.assert_array_equal(relax(parse_polynomial(EX31)).b, [1.0, -1.0, -1.0, 1.0])
        squares = parse_polynomial("x0^2 + 4*x1^4 + 1")
        self.assertEqual(relax(squares), squares)
        motzkin = parse_polynomial(MOTZKIN)
        self.assertEqual(relax(motzkin), motzkin)

    def test_relax_idempotent_and_below(self):
        """测试松弛幂等，且在非负卦限上不大于原多项式"""
        p = parse_polynomial("x0^4 + 2*x0*x1 - x1^3 + x0^2*x1 + 2")
        r = relax(p)
        self.assertEqual(relax(r), r)
        X = np.random.default_rng(2).uniform(0, 2, size=(50, 2))
        self.assertTrue(np.all(r.evaluate_many(X) <= p.evaluate_many(X) + 1e-12))


class TestTransformations(unittest.TestCase):
    def test_with_origin(self):
        p = parse_polynomial("x0^2 - x0")
        q = p.with_origin()
        self.assertEqual(q.origin_index, 0)
        self.assertEqual(q.t, 3)
        self.assertEqual(q.constant, 0.0)
        self.assertIs(q.with_origin(), q)

    def test_substitute_signs(self):
        p = parse_polynomial(EX31)
        np.testing.assert_array_equal(p.substitute_signs([-1]).b, [1.0, 1.0, -1.0, 1.0])
        self.assertEqual(p.substitute_signs([0]), p)
        x = np.array([0.7])
        self.assertAlmostEqual(p.substitute_signs([-1]).evaluate(x), p.evaluate(-x))

    def test_scale(self):
        p = parse_polynomial(MOTZKIN)
        np.testing.assert_allclose(p.scale(2.5).b, 2.5 * p.b)

    def test_immutable(self):
        p = parse_polynomial(MOTZKIN)
        with self.assertRaises(ValueError):
            p.b[0] = 10.0


if __name__ == '__main__':
    unittest.main()
