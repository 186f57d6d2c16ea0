"""
卦限模块，负责符号向量、符号锥上的松弛、最小卦限枚举与分叉下界
"""
from .fork import METHODS, cone_bound, fork_bound
from .minimal import EffectiveSigns, effective_signs, minimal_orthants
from .signs import SignVector, negative_points, positive_points, relax_signed

__all__ = [
    'SignVector',
    'EffectiveSigns',
    'positive_points',
    'negative_points',
    'relax_signed',
    'effective_signs',
    'minimal_orthants',
    'cone_bound',
    'fork_bound',
    'METHODS',
]
