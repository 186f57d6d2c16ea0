"""
分支定界模块，按变量符号划分搜索树并给出全局下界
"""
from .criteria import STRATEGIES, Decision, cut_criteria, sage_deferral
from .search import (STOP_REASONS, BnbResult, ConeEvaluation, branch_and_bound, branch_variable, evaluate_cone,
                     sparse_children)
from .tree import BnbNode, SearchTree

__all__ = [
    'BnbNode',
    'SearchTree',
    'BnbResult',
    'ConeEvaluation',
    'Decision',
    'STRATEGIES',
    'STOP_REASONS',
    'branch_and_bound',
    'branch_variable',
    'evaluate_cone',
    'sparse_children',
    'cut_criteria',
    'sage_deferral',
]
