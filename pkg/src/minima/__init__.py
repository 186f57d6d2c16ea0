"""
极小值模块，SONC-Min启发式与局部下降
"""
from .descent import DescentResult, descend, local_min, project
from .sonc_min import MinimaResult, multi_start, sonc_min, sonc_min_signed

__all__ = [
    'DescentResult',
    'descend',
    'local_min',
    'project',
    'MinimaResult',
    'multi_start',
    'sonc_min',
    'sonc_min_signed',
]
