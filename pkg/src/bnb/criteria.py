# src/bnb/criteria.py
"""
剪枝准则与SAGE延迟计算
"""
import logging
from enum import Enum
from typing import Tuple

from ..bounds.sage import sage_bound
from ..orthants.signs import relax_signed
from ..polycore.polynomial import Polynomial
from .tree import BnbNode, SearchTree

# 配置日志
logger = logging.getLogger(__name__)

STRATEGIES = ('worst_first', 'dfs')


class Decision(str, Enum):
    """剪枝判定"""
    CONTINUE = 'continue'
    CUT = 'cut'
    STOP_ALL = 'stop_all'


def cut_criteria(node: BnbNode, tree: SearchTree, eps: float,
                 strategy: str = 'worst_first') -> Tuple[Decision, str]:
    """
    对选中的节点应用剪枝准则

    Args:
        node: 选中待扩展的节点
        tree: 搜索树（提供全局最优值与已有叶子）
        eps: 精度
        strategy: worst_first 或 dfs

    Returns:
        (判定, 原因)，原因取 gap_closed / leaf_criterion / min_criterion / 空串
    """
    bound = node.lower_bound
    if bound == -float('inf'):
        return Decision.CONTINUE, ''

    worst_first = strategy == 'worst_first'
    # Min准则及其ε松弛：已知点的函数值不超过 bound + ε
    if bound >= tree.best_value - eps:
        if worst_first:
            return Decision.STOP_ALL, 'gap_closed'
        return Decision.CUT, 'min_criterion'

    if worst_first and node.is_full:
        return Decision.STOP_ALL, 'leaf_criterion'

    for leaf in tree.full_leaves():
        if leaf is not node and leaf.lower_bound <= bound:
            return Decision.CUT, 'leaf_criterion'

    return Decision.CONTINUE, ''


def sage_deferral(node: BnbNode, p: Polynomial, tol: float = None) -> BnbNode:
    """
    延迟计算节点的SAGE下界，下界只会提高；SAGE失败时保留原下界

    Args:
        node: 首次被选中的节点
        p: 原多项式
        tol: 求解器容差

    Returns:
        更新后的节点（sage_done 置位）
    """
    try:
        result = sage_bound(relax_signed(p, node.sign.as_array()), domain='positive', tol=tol)
        if not result.failed and result.lower_bound > node.lower_bound:
            logger.debug(f"节点 {node.sign} 的SAGE下界 {result.lower_bound:.8g} 优于 {node.lower_bound:.8g}")
            node.lower_bound = result.lower_bound
            node.raw_bound = max(node.raw_bound, result.lower_bound)
        elif result.failed:
            logger.warning(f"节点 {node.sign} 的SAGE求解失败: {result.solver_status}")
    except Exception as e:
        logger.error(f"节点 {node.sign} 计算SAGE下界时出错: {e}")
    node.sage_done = True
    return node
