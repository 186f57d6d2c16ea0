import os
import sys
import unittest

current_dir = os.path.dirname(os.path.abspath(__file__))
parent_dir = os.path.dirname(current_dir)
sys.path.append(parent_dir)
from src.app_config import BNB_CONFIG, GENERATOR_CONFIG, MINIMA_CONFIG, SOLVER_CONFIG
from src.config import ConfigLoader
from src.minima import descent


class TestConfigLoader(unittest.TestCase):
    def test_default_sections(self):
        """默认配置中的精度为 2^-23"""
        self.assertEqual(SOLVER_CONFIG['tol'], 2.0 ** -23)
        self.assertEqual(BNB_CONFIG['eps'], 2.0 ** -23)
        self.assertEqual(BNB_CONFIG['node_budget_factor'], 4)
        self.assertEqual(GENERATOR_CONFIG['nonsquare_fraction'], 1.0)

    def test_descent_reads_minima_section(self):
        self.assertEqual(descent.ARMIJO_SLOPE, MINIMA_CONFIG['armijo_slope'])
        self.assertEqual(descent.MAX_BACKTRACKS, MINIMA_CONFIG['max_backtracks'])
        self.assertEqual(descent.BACKTRACK, 0.5)
        self.assertEqual(SOLVER_CONFIG['phase_one_box'], 1e4)

    def test_missing_section_is_empty(self):
        self.assertEqual(ConfigLoader.load_section('no_such_section'), {})

    def test_sections_are_copies(self):
        section = ConfigLoader.load_section('bnb')
        section['eps'] = 1.0
        self.assertEqual(ConfigLoader.load_section('bnb')['eps'], 2.0 ** -23)

    def test_missing_file(self):
        with self.assertRaises(FileNotFoundError):
            ConfigLoader.load_json_config('missing.json')


if __name__ == '__main__':
    unittest.main()
