# src/bnb/search.py
"""
按变量符号的分支定界

每个节点是一个符号锥，下界由 relax_signed + SONC（可选SAGE）给出，上界由 SONC-Min 给出。
最终下界为当前所有叶子下界的最小值。
"""
import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence

import numpy as np
from joblib import Parallel, delayed

from ..app_config import BNB_CONFIG
from ..bounds.result import BoundResult
from ..minima.sonc_min import MinimaResult, sonc_min, sonc_min_signed
from ..orthants.fork import cone_bound
from ..orthants.minimal import minimal_orthants
from ..orthants.signs import SignVector
from ..polycore.polynomial import Polynomial
from .criteria import STRATEGIES, Decision, cut_criteria, sage_deferral
from .tree import BnbNode, SearchTree

# 配置日志
logger = logging.getLogger(__name__)

STOP_REASONS = ('gap_closed', 'leaf_criterion', 'tree_exhausted', 'node_budget', 'time_limit')


@dataclass
class ConeEvaluation:
    """一个符号锥上的求界与求极小结果"""
    bound: float
    status: str
    failures: int
    minima: Optional[MinimaResult]


@dataclass
class BnbResult:
    """
    分支定界结果

    Args:
        lower_bound: 叶子下界的最小值
        best_value: 找到的最小函数值
        minimizer: best_value 对应的点
        nodes_expanded: 求解过的节点数
        leaf_reached: 是否处理过全符号叶子
        stop_reason: 停止原因，见 STOP_REASONS
        tree: 最终的搜索树
        root_bound: 根节点下界
        failures: 求界失败的次数（SONC与SAGE分别计数）
    """
    lower_bound: float
    best_value: float
    minimizer: Optional[np.ndarray]
    nodes_expanded: int
    leaf_reached: bool
    stop_reason: str
    tree: SearchTree
    root_bound: float
    failures: int = 0
    wall_time: float = 0.0
    strategy: str = 'worst_first'
    sparse: bool = False

    @property
    def gap(self) -> float:
        if self.lower_bound == -math.inf:
            return math.inf
        return self.best_value - self.lower_bound

    def to_bound_result(self) -> BoundResult:
        status = 'optimal' if math.isfinite(self.lower_bound) else 'numerical_failure'
        return BoundResult('bnb', self.lower_bound, None, status, self.wall_time, None, {
            'best_value': self.best_value,
            'minimizer': self.minimizer,
            'nodes_expanded': self.nodes_expanded,
            'stop_reason': self.stop_reason,
            'leaf_reached': self.leaf_reached,
        })


def evaluate_cone(p: Polynomial, sign: SignVector, with_sage: bool, strategy: str = None,
                  tol: float = None) -> ConeEvaluation:
    """
    求一个符号锥上的下界与SONC-Min上界，异常记为 -inf 而不向外抛出

    Args:
        p: 原多项式
        sign: 符号向量
        with_sage: 是否同时计算SAGE下界并取较大者
        strategy: SONC覆盖策略
        tol: 求解器容差
    """
    entries = sign.as_array()
    failures = 0
    try:
        result = cone_bound(p, entries, 'sonc', strategy, tol)
        bound, status = result.lower_bound, result.solver_status
    except Exception as e:
        logger.error(f"节点 {sign} 计算SONC下界时出错: {e}")
        bound, status = -math.inf, 'numerical_failure'
    if bound == -math.inf:
        failures += 1

    if with_sage:
        try:
            sage = cone_bound(p, entries, 'sage', tol=tol)
            if sage.failed:
                failures += 1
            elif sage.lower_bound > bound:
                bound, status = sage.lower_bound, sage.solver_status
        except Exception as e:
            logger.error(f"节点 {sign} 计算SAGE下界时出错: {e}")
            failures += 1

    try:
        minima = sonc_min(p, strategy) if sign.depth == 0 else sonc_min_signed(p, sign, strategy)
    except Exception as e:
        logger.error(f"节点 {sign} 上SONC-Min出错: {e}")
        minima = None
    return ConeEvaluation(bound, status, failures, minima)


def branch_variable(p: Polynomial, sign: SignVector) -> Optional[int]:
    """
    选择分支变量：未定符号且以奇次出现的变量中，奇次项系数绝对值之和最大者，平局取下标最小

    Returns:
        变量下标；没有这样的变量时返回None
    """
    odd = p.A % 2 == 1
    weights = np.abs(p.b)
    best, best_mass = None, -1.0
    for i in sign.undetermined():
        if not odd[i].any():
            continue
        mass = float(np.sum(weights[odd[i]]))
        if mass > best_mass:
            best, best_mass = i, mass
    return best


def _unanimous_prefix(entries: List[int], group: Sequence[SignVector]) -> List[int]:
    """按下标顺序固定group中取值一致的变量，遇到分歧即停止"""
    for i in range(len(entries)):
        if entries[i] != 0:
            continue
        values = {orthant[i] for orthant in group}
        if len(values) > 1:
            break
        entries[i] = values.pop()
    return entries


def sparse_children(sign: SignVector, orthants: Sequence[SignVector]) -> List[SignVector]:
    """
    稀疏树中节点的子节点：只保留与最小卦限相容的分支，单子节点链直接跳过

    Args:
        sign: 当前节点（已固定的变量是下标前缀）
        orthants: 最小卦限

    Returns:
        子节点的符号向量，+ 分支在前
    """
    consistent = [o for o in orthants if all(s == 0 or s == e for s, e in zip(sign, o))]
    if not consistent or sign.is_full:
        return []
    entries = _unanimous_prefix(list(sign.entries), consistent)
    if 0 not in entries:
        return [SignVector(tuple(entries))]
    i = entries.index(0)
    children = []
    for value in (1, -1):
        group = [o for o in consistent if o[i] == value]
        if not group:
            continue
        child = list(entries)
        child[i] = value
        children.append(SignVector(tuple(_unanimous_prefix(child, group))))
    return children


def _select(active: List[BnbNode], strategy: str) -> BnbNode:
    if strategy == 'dfs':
        return max(active, key=lambda node: node.node_id)
    return min(active, key=lambda node: (node.lower_bound, node.depth, node.node_id))


def branch_and_bound(p: Polynomial, strategy: str = None, sparse: bool = False, eps: float = None,
                     node_budget: int = None, use_sage: bool = None, sage_deferral_mode: bool = None,
                     exhaustive: bool = False, workers: int = None,
                     callback: Callable[[SearchTree], None] = None, time_limit: float = None,
                     covering_strategy: str = None, tol: float = None) -> BnbResult:
    """
    分支定界求全局下界

    Args:
        p: 多项式
        strategy: worst_first（总是扩展下界最差的节点）或 dfs（扩展最后创建的节点）
        sparse: 是否只沿最小卦限建树
        eps: 精度，最差节点的下界不小于 best_value - eps 时停止
        node_budget: 节点数上限，默认 node_budget_factor·2^n
        use_sage: 是否用SAGE改进节点下界
        sage_deferral_mode: 节点第一次被选中时才计算SAGE
        exhaustive: 关闭剪枝准则，一直搜索到树穷尽
        workers: 并行计算两个子节点的进程数
        callback: 根节点建好后、每轮迭代后以及停止时调用 callback(tree)
        time_limit: 墙钟时间上限（秒）
        covering_strategy: SONC覆盖策略
        tol: 求解器容差

    Returns:
        BnbResult
    """
    strategy = strategy or BNB_CONFIG.get('strategy', 'worst_first')
    if strategy not in STRATEGIES:
        raise ValueError(f"未知的节点选择策略: {strategy}，可选 {STRATEGIES}")
    eps = eps if eps is not None else BNB_CONFIG.get('eps', 2.0 ** -23)
    if eps <= 0:
        raise ValueError(f"eps 必须为正: {eps}")
    if node_budget is None:
        node_budget = BNB_CONFIG.get('node_budget_factor', 4) * 2 ** p.n
    use_sage = use_sage if use_sage is not None else BNB_CONFIG.get('use_sage', True)
    if sage_deferral_mode is None:
        sage_deferral_mode = BNB_CONFIG.get('sage_deferral', False)
    defer = use_sage and sage_deferral_mode

    started = time.perf_counter()
    orthants = [orthant for _, orthant in minimal_orthants(p)] if sparse else None

    def make_node(sign: SignVector, evaluation: ConeEvaluation, floor: float) -> BnbNode:
        minima = evaluation.minima
        node = BnbNode(
            sign=sign,
            lower_bound=max(evaluation.bound, floor),
            raw_bound=evaluation.bound,
            status=evaluation.status,
            best_value=minima.value if minima is not None else math.inf,
            minimizer=minima.candidate if minima is not None else None,
            sage_done=not defer,
        )
        if not sparse and not sign.is_full:
            node.terminal = branch_variable(p, sign) is None
        return node

    root_sign = SignVector.zeros(p.n)
    root_eval = evaluate_cone(p, root_sign, use_sage and not defer, covering_strategy, tol)
    failures = root_eval.failures
    tree = SearchTree(make_node(root_sign, root_eval, -math.inf))
    logger.info(f"根节点下界 {tree.root.lower_bound:.8g}，初始最优值 {tree.best_value:.8g}")
    if callback is not None:
        callback(tree)

    stop_reason = 'tree_exhausted'
    leaf_reached = False
    while True:
        active = tree.active_nodes()
        if not active:
            stop_reason = 'tree_exhausted'
            break
        if time_limit is not None and time.perf_counter() - started > time_limit:
            stop_reason = 'time_limit'
            break

        node = _select(active, strategy)
        logger.debug(f"选中节点 {node.sign}，下界 {node.lower_bound:.8g}")

        if not node.sage_done:
            sage_deferral(node, p, tol)
            tree.propagate(node)
            if callback is not None:
                callback(tree)
            continue

        if not exhaustive:
            decision, reason = cut_criteria(node, tree, eps, strategy)
            if decision == Decision.STOP_ALL:
                stop_reason = reason
                leaf_reached = leaf_reached or node.is_full
                break
            if decision == Decision.CUT:
                logger.debug(f"剪去节点 {node.sign} ({reason})")
                node.active = False
                if callback is not None:
                    callback(tree)
                continue

        if sparse:
            child_signs = sparse_children(node.sign, orthants)
        elif node.is_full:
            child_signs = []
        else:
            i = branch_variable(p, node.sign)
            child_signs = [node.sign.with_sign(i, 1), node.sign.with_sign(i, -1)]

        if not child_signs:
            leaf_reached = True
            node.active = False
            if callback is not None:
                callback(tree)
            continue

        if len(tree) + len(child_signs) > node_budget:
            logger.warning(f"达到节点数上限 {node_budget}，停止搜索")
            stop_reason = 'node_budget'
            break

        with_sage = use_sage and not defer
        if workers is not None and workers > 1 and len(child_signs) > 1:
            evaluations = Parallel(n_jobs=workers)(
                delayed(evaluate_cone)(p, s, with_sage, covering_strategy, tol) for s in child_signs
            )
        else:
            evaluations = [evaluate_cone(p, s, with_sage, covering_strategy, tol) for s in child_signs]

        for sign, evaluation in zip(child_signs, evaluations):
            failures += evaluation.failures
            tree.add_child(node, make_node(sign, evaluation, node.lower_bound))
        node.active = False
        tree.propagate(node.children[0])
        if callback is not None:
            callback(tree)

    # 停止时的最终状态
    if callback is not None:
        callback(tree)
    elapsed = time.perf_counter() - started
    lower_bound = tree.lower_bound()
    logger.info(f"分支定界结束: 下界 {lower_bound:.8g}，最优值 {tree.best_value:.8g}，"
                f"{len(tree)} 个节点，原因 {stop_reason} ({elapsed:.3f}s)")
    return BnbResult(
        lower_bound=lower_bound,
        best_value=tree.best_value,
        minimizer=tree.best_point,
        nodes_expanded=len(tree),
        leaf_reached=leaf_reached,
        stop_reason=stop_reason,
        tree=tree,
        root_bound=tree.root.raw_bound,
        failures=failures,
        wall_time=elapsed,
        strategy=strategy,
        sparse=sparse,
    )
