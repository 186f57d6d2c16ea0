# src/orthants/fork.py
"""
分叉策略：只在最小卦限上求界，取其最小值
"""
import logging
import math
import time
from typing import Sequence

from joblib import Parallel, delayed

from ..bounds.result import BoundResult
from ..bounds.sage import sage_bound
from ..bounds.sonc import sonc_bound
from ..polycore.polynomial import Polynomial
from .minimal import minimal_orthants
from .signs import SignVector, relax_signed

# 配置日志
logger = logging.getLogger(__name__)

METHODS = ('sonc', 'sage', 'both')


def _better(first: BoundResult, second: BoundResult) -> BoundResult:
    if second.failed:
        return first
    if first.failed or second.lower_bound > first.lower_bound:
        return second
    return first


def cone_bound(p: Polynomial, s, method: str = 'sonc', strategy: str = None, tol: float = None) -> BoundResult:
    """
    符号锥上的下界：对 relax_signed(p, s) 在正卦限上求界

    Args:
        p: 多项式
        s: 符号向量，全零表示 R^n
        method: sonc / sage / both（both 取两者中较好的）
        strategy: SONC覆盖策略
        tol: 求解器容差

    Returns:
        BoundResult
    """
    if method not in METHODS:
        raise ValueError(f"未知的求界方法: {method}，可选 {METHODS}")
    entries = s.as_array() if isinstance(s, SignVector) else s
    q = relax_signed(p, entries)
    if method == 'sage':
        return sage_bound(q, domain='positive', tol=tol)
    result = sonc_bound(q, domain='positive', strategy=strategy, tol=tol)
    if method == 'both':
        result = _better(result, sage_bound(q, domain='positive', tol=tol))
    return result


def _safe_cone_bound(p: Polynomial, s, method: str, strategy: str, tol: float) -> BoundResult:
    try:
        return cone_bound(p, s, method, strategy, tol)
    except Exception as e:
        logger.error(f"卦限 {s} 上求界时出错: {e}")
        return BoundResult(method, -math.inf, None, 'numerical_failure')


def fork_bound(p: Polynomial, method: str = 'sonc', strategy: str = None, tol: float = None,
               workers: int = None, orthants: Sequence[SignVector] = None) -> BoundResult:
    """
    分叉下界

    先求整个 R^n 上同一方法的下界作为下限，再对每个最小卦限求界；
    任一卦限失败时结果为 -inf。

    Args:
        p: 多项式
        method: sonc / sage / both
        strategy: SONC覆盖策略
        tol: 求解器容差
        workers: 并行求解卦限的进程数，None或1表示顺序执行
        orthants: 可选，直接给定卦限列表（默认由 minimal_orthants 计算）

    Returns:
        BoundResult，details 中包含卦限与各卦限的下界
    """
    if method not in METHODS:
        raise ValueError(f"未知的求界方法: {method}，可选 {METHODS}")
    started = time.perf_counter()
    if orthants is None:
        orthants = [orthant for _, orthant in minimal_orthants(p)]
    orthants = list(orthants)

    floor = _safe_cone_bound(p, SignVector.zeros(p.n), method, strategy, tol)
    if workers is not None and workers > 1 and len(orthants) > 1:
        results = Parallel(n_jobs=workers)(
            delayed(_safe_cone_bound)(p, s, method, strategy, tol) for s in orthants
        )
    else:
        results = [_safe_cone_bound(p, s, method, strategy, tol) for s in orthants]

    bounds = [r.lower_bound for r in results]
    failed = [str(s) for s, r in zip(orthants, results) if r.failed]
    if failed:
        logger.warning(f"卦限 {failed} 上求界失败，分叉下界取 -inf")
        lower_bound = -math.inf
        status = next(r.solver_status for r in results if r.failed)
    else:
        lower_bound = min(bounds) if bounds else floor.lower_bound
        if not floor.failed:
            lower_bound = max(lower_bound, floor.lower_bound)
        status = 'optimal'

    elapsed = time.perf_counter() - started
    logger.info(f"分叉下界 {lower_bound:.8g} ({len(orthants)} 个卦限, {elapsed:.3f}s)")
    return BoundResult('fork', lower_bound, None, status, elapsed, p, {
        'orthants': orthants,
        'orthant_bounds': bounds,
        'orthant_status': [r.solver_status for r in results],
        'floor': floor.lower_bound,
        'method': method,
    })
