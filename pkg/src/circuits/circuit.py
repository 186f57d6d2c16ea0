# src/circuits/circuit.py
"""
电路多项式：电路数、非负性判定与闭式极小点
"""
import logging
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple

import numpy as np

from ..polycore.errors import CircuitDomainError
from ..polycore.polynomial import Polynomial

# 配置日志
logger = logging.getLogger(__name__)

# 电路数比较的相对容差，|b_β| = Θ 的边界情形判为非负
NONNEGATIVITY_RTOL = 1e-9


@dataclass(frozen=True, eq=False)
class Circuit:
    """
    一个电路：内点β由外点α(j)以正的重心坐标λ表示

    Args:
        inner_index: β在多项式支撑集中的下标
        outer_indices: 外点下标
        lambdas: 与外点对应的重心坐标
        origin_index: 原点在多项式中的下标，原点不在外点中时为None
        share: 分配给该电路的 |b_β| 的比例
    """
    inner_index: int
    outer_indices: Tuple[int, ...]
    lambdas: np.ndarray
    origin_index: Optional[int] = None
    share: float = 1.0

    @property
    def has_origin(self) -> bool:
        return self.origin_index is not None and self.origin_index in self.outer_indices

    @property
    def r(self) -> int:
        """非原点外点的个数"""
        return len(self.outer_indices) - (1 if self.has_origin else 0)

    def lambda_of(self, index: int) -> float:
        return float(self.lambdas[self.outer_indices.index(index)])

    def support(self) -> Tuple[int, ...]:
        return tuple(self.outer_indices) + (self.inner_index,)


def circuit_number(circuit: Circuit, weights: Sequence[float]) -> float:
    """
    电路数 Θ = Π_j (w_j / λ_j)^{λ_j}，在对数空间计算

    Args:
        circuit: 电路
        weights: 与外点一一对应的正权重

    Returns:
        电路数
    """
    weights = np.asarray(weights, dtype=float).ravel()
    if weights.size != len(circuit.outer_indices):
        raise CircuitDomainError(f"权重个数 {weights.size} 与外点个数 {len(circuit.outer_indices)} 不一致")
    if np.any(weights <= 0) or np.any(circuit.lambdas <= 0):
        raise CircuitDomainError(f"电路数要求权重和重心坐标均为正: weights={weights.tolist()}")
    lam = circuit.lambdas
    return float(np.exp(np.sum(lam * (np.log(weights) - np.log(lam)))))


def _is_monomial_square(p: Polynomial, j: int) -> bool:
    return p.b[j] > 0 and not np.any(p.A[:, j] % 2)


def is_nonnegative_circuit(circuit: Circuit, p: Polynomial) -> bool:
    """
    电路多项式的非负性判定：内项是单项式平方，或 |b_β| <= Θ（边界相等判为非负）

    Args:
        circuit: 电路，下标指向p
        p: 提供系数的多项式
    """
    if _is_monomial_square(p, circuit.inner_index):
        return True
    weights = p.b[list(circuit.outer_indices)]
    if np.any(weights < 0):
        return False
    if np.any(weights == 0):
        theta = 0.0
    else:
        theta = circuit_number(circuit, weights)
    return abs(p.b[circuit.inner_index]) <= theta * (1.0 + NONNEGATIVITY_RTOL)


def circuit_polynomial(circuit: Circuit, p: Polynomial) -> Polynomial:
    """取出p在电路支撑集上的部分，得到电路多项式"""
    support = list(circuit.support())
    return Polynomial(p.A[:, support], p.b[support], p.n)


def circuit_minimizer(circuit: Circuit, p: Polynomial) -> np.ndarray:
    """
    电路多项式的极小点

    解线性方程组 ⟨s, α(j) - β⟩ = log(λ_j |b_β| / b_{α(j)})（对非原点外点j），返回 e^s；
    内项系数为正且β有奇数分量时先做 x_k -> -x_k 代换，求解后再翻转回来。

    Args:
        circuit: 电路
        p: 提供系数的多项式

    Returns:
        极小点；内项是单项式平方时返回零向量
    """
    inner = circuit.inner_index
    if _is_monomial_square(p, inner) or p.b[inner] == 0:
        return np.zeros(p.n)

    beta = p.A[:, inner].astype(float)
    flip = None
    if p.b[inner] > 0:
        odd = np.flatnonzero(p.A[:, inner] % 2)
        flip = int(odd[0])

    rows = [j for j in circuit.outer_indices if j != circuit.origin_index]
    if not rows:
        return np.zeros(p.n)
    weights = p.b[rows]
    if np.any(weights <= 0):
        raise CircuitDomainError(f"外点系数必须为正: {weights.tolist()}")

    M = np.array([p.A[:, j] - beta for j in rows], dtype=float)
    rhs = np.array([np.log(circuit.lambda_of(j) * abs(p.b[inner]) / p.b[j]) for j in rows])
    # 最小范数解，张成空间外的分量为0
    s, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    x = np.exp(s)
    if flip is not None:
        x[flip] = -x[flip]
    logger.debug(f"电路 {circuit.support()} 的极小点: {x}")
    return x
