# src/circuits/covering.py
"""
电路覆盖：为每个负项找一组正项（含原点）使其成为它们的凸组合

正项与原点是外点候选，负项（原点除外）是需要覆盖的内点。对 relax(p) 而言，
正项恰好是单项式平方；对符号锥上的松弛，正的奇次项也可以作为外点。
"""
import logging
from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from ..app_config import COVERING_CONFIG
from ..polycore.errors import UnboundedRelaxation
from ..polycore.polynomial import Polynomial
from ..solver.lp import solve_lp
from ..solver.program import LinearProgram, SolverStatus
from .circuit import Circuit

# 配置日志
logger = logging.getLogger(__name__)

STRATEGIES = ('simple', 'extended')


@dataclass(frozen=True, eq=False)
class Covering:
    """
    覆盖结果

    Args:
        polynomial: 补齐原点后的多项式，电路中的下标都指向它
        circuits: 电路列表
        strategy: simple 或 extended
    """
    polynomial: Polynomial
    circuits: Tuple[Circuit, ...]
    strategy: str = 'simple'
    budget: Dict[int, List[int]] = field(init=False)

    def __post_init__(self):
        budget: Dict[int, List[int]] = {}
        origin = self.polynomial.origin_index
        for k, circuit in enumerate(self.circuits):
            for j in circuit.outer_indices:
                if j != origin:
                    budget.setdefault(j, []).append(k)
        object.__setattr__(self, 'budget', budget)

    def __len__(self) -> int:
        return len(self.circuits)

    def circuits_of(self, inner_index: int) -> List[Circuit]:
        return [c for c in self.circuits if c.inner_index == inner_index]


def outer_candidates(p: Polynomial) -> List[int]:
    """外点候选：系数为正的项加上原点"""
    candidates = set(int(j) for j in np.flatnonzero(p.b > 0))
    if p.origin_index is not None:
        candidates.add(p.origin_index)
    return sorted(candidates)


def inner_terms(p: Polynomial) -> List[int]:
    """需要覆盖的负项（常数项除外）"""
    return [int(j) for j in np.flatnonzero(p.b < 0) if j != p.origin_index]


def caratheodory_reduce(points: np.ndarray, lambdas: np.ndarray, target: np.ndarray, cost: np.ndarray,
                        lambda_zero: float) -> Tuple[List[int], np.ndarray]:
    """
    把凸组合化简为仿射无关的外点集合

    沿仿射相关向量d移动 λ - θd，直到某个坐标降为0并删去它；d的方向取使距离加权目标不增的一侧。

    Args:
        points: n×k 外点矩阵
        lambdas: 长度k的凸组合系数
        target: 被表示的点β
        cost: 每个外点的权重（到β的距离）
        lambda_zero: 视为零的阈值

    Returns:
        (保留的列下标, 对应的重心坐标)
    """
    kept = [int(j) for j in np.flatnonzero(lambdas > lambda_zero)]
    lam = lambdas[kept].astype(float)
    while len(kept) > 1:
        M = np.vstack([points[:, kept], np.ones(len(kept))])
        kernel = null_space(M)
        if kernel.shape[1] == 0:
            break
        d = kernel[:, 0]
        if cost[kept] @ d < 0:
            d = -d
        moving = d > 1e-12
        ratios = lam[moving] / d[moving]
        theta = float(np.min(ratios))
        lam = lam - theta * d
        drop = int(np.flatnonzero(moving)[int(np.argmin(ratios))])
        lam[drop] = 0.0
        survivors = [k for k in range(len(kept)) if lam[k] > lambda_zero]
        kept = [kept[k] for k in survivors]
        lam = lam[survivors]
        logger.debug(f"Carathéodory化简: 保留外点 {kept}")

    # 在保留的外点上重新精确求解重心坐标
    M = np.vstack([points[:, kept], np.ones(len(kept))])
    lam, *_ = np.linalg.lstsq(M, np.append(target, 1.0), rcond=None)
    return kept, lam


def _cover_term(p: Polynomial, inner: int, candidates: Sequence[int], lambda_zero: float,
                barycentric_tol: float) -> Circuit:
    beta = p.A[:, inner].astype(float)
    points = p.A[:, list(candidates)].astype(float)
    cost = np.linalg.norm(points - beta[:, None], axis=0)
    lp = LinearProgram(cost, np.vstack([points, np.ones(len(candidates))]), np.append(beta, 1.0))
    solution = solve_lp(lp)
    if solution.status == SolverStatus.INFEASIBLE:
        raise UnboundedRelaxation(inner, p.exponent(inner))
    if not solution.optimal:
        raise RuntimeError(f"第 {inner} 项的覆盖线性规划求解失败: {solution.status.value}")

    kept, lam = caratheodory_reduce(points, solution.x, beta, cost, lambda_zero)
    residual = np.max(np.abs(points[:, kept] @ lam - beta))
    if residual > barycentric_tol or np.any(lam <= 0):
        raise RuntimeError(f"第 {inner} 项的重心坐标不满足 Σλα=β (残差 {residual:.3e})")
    return Circuit(inner, tuple(int(candidates[k]) for k in kept), lam, p.origin_index)


def _register_extended(p: Polynomial, base: List[Circuit], lambda_zero: float,
                       barycentric_tol: float) -> List[Circuit]:
    """把落在某个电路外点凸包内的其他负项也登记到该电路上"""
    circuits = list(base)
    seen = {(c.inner_index, c.outer_indices) for c in base}
    inners = [c.inner_index for c in base]
    for c in base:
        points = p.A[:, list(c.outer_indices)].astype(float)
        M = np.vstack([points, np.ones(points.shape[1])])
        for other in inners:
            if other == c.inner_index:
                continue
            beta = p.A[:, other].astype(float)
            lam, *_ = np.linalg.lstsq(M, np.append(beta, 1.0), rcond=None)
            if np.max(np.abs(M @ lam - np.append(beta, 1.0))) > barycentric_tol or np.any(lam < -barycentric_tol):
                continue
            kept = [k for k in range(lam.size) if lam[k] > lambda_zero]
            outer = tuple(c.outer_indices[k] for k in kept)
            if (other, outer) in seen:
                continue
            sub = M[:, kept]
            lam_kept, *_ = np.linalg.lstsq(sub, np.append(beta, 1.0), rcond=None)
            seen.add((other, outer))
            circuits.append(Circuit(other, outer, lam_kept, p.origin_index))

    counts: Dict[int, int] = {}
    for c in circuits:
        counts[c.inner_index] = counts.get(c.inner_index, 0) + 1
    return [Circuit(c.inner_index, c.outer_indices, c.lambdas, c.origin_index, 1.0 / counts[c.inner_index])
            for c in circuits]


def compute_covering(p: Polynomial, strategy: str = None, lambda_zero: float = None,
                     barycentric_tol: float = None) -> Covering:
    """
    计算电路覆盖

    Args:
        p: 多项式（正卦限视角：负项需要覆盖，正项与原点可作外点）
        strategy: simple（每个负项一个电路）或 extended（负项系数平均分给包含它的所有电路）
        lambda_zero: 低于该值的λ视为零
        barycentric_tol: 重心恒等式的容差

    Returns:
        Covering

    Raises:
        UnboundedRelaxation: 某个负项不在外点候选的凸包内
    """
    strategy = strategy or COVERING_CONFIG.get('strategy', 'simple')
    if strategy not in STRATEGIES:
        raise ValueError(f"未知的覆盖策略: {strategy}")
    lambda_zero = lambda_zero if lambda_zero is not None else COVERING_CONFIG.get('lambda_zero', 1e-9)
    barycentric_tol = barycentric_tol if barycentric_tol is not None else COVERING_CONFIG.get('barycentric_tol', 1e-9)

    q = p.with_origin()
    candidates = outer_candidates(q)
    circuits = [_cover_term(q, j, candidates, lambda_zero, barycentric_tol) for j in inner_terms(q)]
    if strategy == 'extended':
        circuits = _register_extended(q, circuits, lambda_zero, barycentric_tol)

    logger.debug(f"覆盖完成: {len(circuits)} 个电路 (策略 {strategy})")
    return Covering(q, tuple(circuits), strategy)
