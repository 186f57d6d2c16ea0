"""
命令行模块，提供实例生成器、基准测试与报告输出
"""
from .bench import BenchInstance, instances_from_directory, instances_from_grid, run_bench, run_method
from .commands import EXIT_INPUT_ERROR, EXIT_INTERNAL_ERROR, EXIT_OK, build_parser, main
from .generator import GeneratorSpec, generate_polynomial
from .report import RunReport, compute_gap, read_reports, reports_to_frame, summarize, write_reports

__all__ = [
    'main',
    'build_parser',
    'EXIT_OK',
    'EXIT_INPUT_ERROR',
    'EXIT_INTERNAL_ERROR',
    'GeneratorSpec',
    'generate_polynomial',
    'BenchInstance',
    'instances_from_grid',
    'instances_from_directory',
    'run_bench',
    'run_method',
    'RunReport',
    'compute_gap',
    'reports_to_frame',
    'write_reports',
    'read_reports',
    'summarize',
]
