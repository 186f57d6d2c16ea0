# src/minima/sonc_min.py
"""
SONC-Min启发式：电路极小点 -> 重心 -> 在松弛多项式上下降 -> 在原多项式上下降
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..app_config import MINIMA_CONFIG
from ..circuits.circuit import circuit_minimizer
from ..circuits.covering import compute_covering
from ..polycore.errors import CircuitDomainError, UnboundedRelaxation
from ..polycore.polynomial import Polynomial, relax
from ..orthants.signs import SignVector, relax_signed
from .descent import descend

# 配置日志
logger = logging.getLogger(__name__)


@dataclass
class MinimaResult:
    """
    SONC-Min的结果

    Args:
        candidate: 最终点
        value: p(candidate)
        relaxed_candidate: 在松弛多项式上下降到达的点（回退多起点时为None）
        circuit_minimizers: 各电路的极小点
        iterations: 所有下降阶段的迭代总数
        converged: 最后一次下降是否满足梯度容差（否则是达到了迭代上限）
        fallback: 是否使用了多起点回退
    """
    candidate: np.ndarray
    value: float
    relaxed_candidate: Optional[np.ndarray] = None
    circuit_minimizers: List[np.ndarray] = field(default_factory=list)
    iterations: int = 0
    converged: bool = False
    fallback: bool = False


def _circuit_starts(q: Polynomial, strategy: str) -> List[np.ndarray]:
    """正卦限视角下q的覆盖中各电路的极小点，覆盖无界时返回空列表"""
    try:
        covering = compute_covering(q, strategy)
        return [circuit_minimizer(c, covering.polynomial) for c in covering.circuits]
    except (UnboundedRelaxation, CircuitDomainError) as e:
        logger.warning(f"无法从覆盖得到电路极小点，改用多起点下降: {e}")
        return []


def multi_start(p: Polynomial, n_starts: int = None, seed: int = None, radius: float = None,
                tol: float = None, max_iter: int = None, signs=None) -> MinimaResult:
    """
    多起点局部下降，第一个起点是原点，其余在 [-radius, radius]^n 中按种子随机生成

    Returns:
        函数值最小的下降结果
    """
    n_starts = n_starts if n_starts is not None else MINIMA_CONFIG.get('n_starts', 8)
    seed = seed if seed is not None else MINIMA_CONFIG.get('seed', 0)
    radius = radius if radius is not None else MINIMA_CONFIG.get('start_radius', 2.0)

    rng = np.random.default_rng(seed)
    starts = [np.zeros(p.n)] + [rng.uniform(-radius, radius, p.n) for _ in range(max(n_starts - 1, 0))]
    if signs is not None:
        mask = np.asarray(signs, dtype=int)
        starts = [np.where(mask != 0, mask * np.abs(x), x) for x in starts]

    best = None
    iterations = 0
    for start in starts:
        result = descend(p, start, tol, max_iter, signs)
        iterations += result.iterations
        if best is None or result.value < best.value:
            best = result
    return MinimaResult(best.x, best.value, iterations=iterations, converged=best.converged, fallback=True)


def _run(p: Polynomial, relaxed: Polynomial, flip: Optional[np.ndarray], signs, strategy: str,
         tol: float, max_iter: int, n_starts: int, seed: int) -> MinimaResult:
    """在正卦限的松弛上下降，按flip翻转坐标后再在p上（可限制符号）下降"""
    minimizers = _circuit_starts(relaxed, strategy)
    if not minimizers:
        return multi_start(p, n_starts, seed, tol=tol, max_iter=max_iter, signs=signs)

    barycenter = np.mean(minimizers, axis=0)
    relaxed_run = descend(relaxed, barycenter, tol, max_iter, np.ones(p.n, dtype=int))
    start = relaxed_run.x if flip is None else flip * relaxed_run.x

    if flip is None and signs is None and relaxed == p:
        final = relaxed_run
        iterations = relaxed_run.iterations
    else:
        final = descend(p, start, tol, max_iter, signs)
        iterations = relaxed_run.iterations + final.iterations
    logger.debug(f"SONC-Min: {len(minimizers)} 个电路极小点, 松弛值 {relaxed_run.value:.8g}, 最终值 {final.value:.8g}")
    return MinimaResult(final.x, float(p.evaluate(final.x)), relaxed_run.x, minimizers, iterations, final.converged)


def sonc_min(p: Polynomial, strategy: str = None, tol: float = None, max_iter: int = None,
             n_starts: int = None, seed: int = None) -> MinimaResult:
    """
    SONC-Min启发式求局部极小

    Args:
        p: 多项式
        strategy: 覆盖策略
        tol: 下降的梯度容差
        max_iter: 每次下降的迭代上限
        n_starts: 回退多起点的个数
        seed: 回退多起点的随机种子

    Returns:
        MinimaResult，value 是一个上界
    """
    return _run(p, relax(p), None, None, strategy, tol, max_iter, n_starts, seed)


def sonc_min_signed(p: Polynomial, s, strategy: str = None, tol: float = None, max_iter: int = None,
                    n_starts: int = None, seed: int = None) -> MinimaResult:
    """
    符号锥上的SONC-Min：在 relax_signed(p, s) 上求起点，按s翻转坐标，再在锥内对p下降

    Args:
        p: 多项式
        s: 符号向量，至少固定一个符号

    Returns:
        MinimaResult，candidate 落在符号锥内
    """
    signs = s if isinstance(s, SignVector) else SignVector(tuple(s))
    if signs.depth == 0:
        raise ValueError("sonc_min_signed 至少需要固定一个变量的符号，否则请使用 sonc_min")
    entries = signs.as_array()
    flip = np.where(entries < 0, -1.0, 1.0)
    return _run(p, relax_signed(p, entries), flip, entries, strategy, tol, max_iter, n_starts, seed)
