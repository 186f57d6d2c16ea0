# src/app_config.py
"""
全局配置 - 各模块共用的默认参数字典

数值来自 config/defaults.json，环境变量 SONC_CONFIG_FILE 可以指定同目录下的其他配置文件。
"""
import os

from .config.loader import ConfigLoader

_CONFIG_FILE = os.environ.get('SONC_CONFIG_FILE', ConfigLoader.DEFAULTS_FILE)

SOLVER_CONFIG = ConfigLoader.load_section('solver', _CONFIG_FILE)
LP_CONFIG = ConfigLoader.load_section('lp', _CONFIG_FILE)
COVERING_CONFIG = ConfigLoader.load_section('covering', _CONFIG_FILE)
MINIMA_CONFIG = ConfigLoader.load_section('minima', _CONFIG_FILE)
ORTHANT_CONFIG = ConfigLoader.load_section('orthants', _CONFIG_FILE)
BNB_CONFIG = ConfigLoader.load_section('bnb', _CONFIG_FILE)
GENERATOR_CONFIG = ConfigLoader.load_section('generator', _CONFIG_FILE)
BENCH_CONFIG = ConfigLoader.load_section('bench', _CONFIG_FILE)
