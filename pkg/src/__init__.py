"""
SONC/SAGE 多项式下界库

稀疏多项式的解析与求值、电路覆盖、SONC几何规划与SAGE相对熵规划下界、
SONC-Min局部极小启发式、最小卦限以及按符号的分支定界。
"""
from .polycore import Polynomial, load_polynomial, parse_polynomial, relax
from .bounds import BoundResult, sage_bound, sonc_bound
from .minima import MinimaResult, local_min, sonc_min, sonc_min_signed
from .orthants import SignVector, fork_bound, minimal_orthants, relax_signed
from .bnb import BnbResult, branch_and_bound

__all__ = [
    'Polynomial',
    'parse_polynomial',
    'load_polynomial',
    'relax',
    'BoundResult',
    'sonc_bound',
    'sage_bound',
    'MinimaResult',
    'local_min',
    'sonc_min',
    'sonc_min_signed',
    'SignVector',
    'relax_signed',
    'minimal_orthants',
    'fork_bound',
    'BnbResult',
    'branch_and_bound',
]
