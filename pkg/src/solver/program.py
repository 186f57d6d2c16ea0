# src/solver/program.py
"""
规划问题的统一描述：线性规划、凸规划的约束原子以及求解结果
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from scipy.special import logsumexp, softmax


class SolverStatus(str, Enum):
    """求解状态"""
    OPTIMAL = 'optimal'
    INFEASIBLE = 'infeasible'
    UNBOUNDED = 'unbounded'
    NUMERICAL_FAILURE = 'numerical_failure'


@dataclass
class SolverSolution:
    """求解结果，残差依次为平稳性（零空间牛顿步的相对长度）、原始可行性和对偶间隙估计"""
    status: SolverStatus
    x: Optional[np.ndarray] = None
    objective: float = float('nan')
    stationarity: float = float('inf')
    primal_feasibility: float = float('inf')
    gap: float = float('inf')
    iterations: int = 0

    @property
    def optimal(self) -> bool:
        return self.status == SolverStatus.OPTIMAL


@dataclass
class LinearProgram:
    """标准形线性规划 min c·x, E x = f, x >= 0"""
    c: np.ndarray
    E: np.ndarray
    f: np.ndarray

    def __post_init__(self):
        self.c = np.asarray(self.c, dtype=float).ravel()
        self.E = np.atleast_2d(np.asarray(self.E, dtype=float))
        self.f = np.asarray(self.f, dtype=float).ravel()
        if self.E.shape != (self.f.size, self.c.size):
            raise ValueError(f"线性规划维度不一致: E{self.E.shape}, f({self.f.size}), c({self.c.size})")
        if not (np.all(np.isfinite(self.c)) and np.all(np.isfinite(self.E)) and np.all(np.isfinite(self.f))):
            raise ValueError("线性规划数据必须是有限值")

    @property
    def m(self) -> int:
        return self.c.size


class ConstraintAtom:
    """
    凸约束原子 g(z) = core(z) + a·z + h <= 0

    子类只实现非线性部分core，仿射部分 (a, h) 由基类处理。
    """

    def __init__(self, m: int, a=None, h: float = 0.0):
        self.m = m
        self.a = np.zeros(m) if a is None else np.asarray(a, dtype=float).ravel()
        self.h = float(h)
        if self.a.size != m:
            raise ValueError(f"仿射系数长度 {self.a.size} 与变量个数 {m} 不一致")

    def _core(self, z):
        return 0.0, np.zeros(self.m), np.zeros((self.m, self.m))

    def evaluate(self, z: np.ndarray):
        """
        计算约束函数值、梯度与Hessian

        Returns:
            (value, gradient, hessian)
        """
        value, grad, hess = self._core(z)
        return value + self.a @ z + self.h, grad + self.a, hess

    def value(self, z: np.ndarray) -> float:
        return self.evaluate(z)[0]

    def _extended(self, m: int) -> 'ConstraintAtom':
        raise NotImplementedError

    def with_slack(self) -> 'ConstraintAtom':
        """在末尾增加松弛变量s，得到 g(z) - s <= 0（一阶段问题使用）"""
        atom = self._extended(self.m + 1)
        atom.a = np.append(self.a, -1.0)
        atom.h = self.h
        return atom

    def indices(self) -> Sequence[int]:
        return ()


class AffineInequality(ConstraintAtom):
    """仿射不等式 a·z + h <= 0"""

    def _extended(self, m):
        return AffineInequality(m)


class LogSumExpInequality(ConstraintAtom):
    """对数和指数不等式 log Σ_k exp(G_k·z + g_k) + a·z + h <= 0"""

    def __init__(self, G, g, a=None, h: float = 0.0):
        G = np.atleast_2d(np.asarray(G, dtype=float))
        super().__init__(G.shape[1], a, h)
        self.G = G
        self.g = np.asarray(g, dtype=float).ravel()
        if self.g.size != G.shape[0]:
            raise ValueError(f"对数和指数约束的行数 {G.shape[0]} 与偏移长度 {self.g.size} 不一致")

    def _core(self, z):
        y = self.G @ z + self.g
        # logsumexp内部做最大值平移，避免溢出
        value = logsumexp(y)
        pi = softmax(y)
        grad = self.G.T @ pi
        hess = self.G.T @ (np.diag(pi) - np.outer(pi, pi)) @ self.G
        return value, grad, hess

    def _extended(self, m):
        G = np.hstack([self.G, np.zeros((self.G.shape[0], m - self.m))])
        return LogSumExpInequality(G, self.g)


class RelativeEntropyInequality(ConstraintAtom):
    """
    相对熵不等式 D(z_u, e·z_v) + a·z + h <= 0

    D(u, e·v) = Σ_k u_k log(u_k / (e·v_k))，要求 z_u > 0 且 z_v > 0。
    """

    def __init__(self, m: int, u_index: Sequence[int], v_index: Sequence[int], a=None, h: float = 0.0):
        super().__init__(m, a, h)
        self.u_index = np.asarray(u_index, dtype=int).ravel()
        self.v_index = np.asarray(v_index, dtype=int).ravel()
        if self.u_index.size != self.v_index.size:
            raise ValueError("相对熵约束的两组变量长度必须相同")
        if np.any(self.u_index >= m) or np.any(self.v_index >= m) or np.any(self.u_index < 0) or np.any(self.v_index < 0):
            raise ValueError("相对熵约束的变量下标越界")

    def _core(self, z):
        u = z[self.u_index]
        v = z[self.v_index]
        log_ratio = np.log(u) - np.log(v)
        value = float(np.sum(u * (log_ratio - 1.0)))

        grad = np.zeros(self.m)
        np.add.at(grad, self.u_index, log_ratio)
        np.add.at(grad, self.v_index, -u / v)

        hess = np.zeros((self.m, self.m))
        np.add.at(hess, (self.u_index, self.u_index), 1.0 / u)
        np.add.at(hess, (self.u_index, self.v_index), -1.0 / v)
        np.add.at(hess, (self.v_index, self.u_index), -1.0 / v)
        np.add.at(hess, (self.v_index, self.v_index), u / v ** 2)
        return value, grad, hess

    def _extended(self, m):
        return RelativeEntropyInequality(m, self.u_index, self.v_index)

    def indices(self):
        return tuple(self.u_index) + tuple(self.v_index)


@dataclass
class ConvexProgram:
    """
    凸规划

    min  c·z + Σ_k w_k·exp(z_{e_k})
    s.t. E z = f
         每个约束原子 g(z) <= 0
         z_i > 0 (i ∈ positive)

    Args:
        m: 变量个数
        c: 线性目标系数
        exp_index / exp_weight: 指数目标项的变量下标与非负权重
        E / f: 等式约束
        constraints: 约束原子列表
        positive: 严格为正的变量下标，相对熵原子涉及的变量自动加入
        start: 可选初始点
    """
    m: int
    c: Optional[np.ndarray] = None
    exp_index: Sequence[int] = ()
    exp_weight: Sequence[float] = ()
    E: Optional[np.ndarray] = None
    f: Optional[np.ndarray] = None
    constraints: List[ConstraintAtom] = field(default_factory=list)
    positive: Sequence[int] = ()
    start: Optional[np.ndarray] = None

    def __post_init__(self):
        self.c = np.zeros(self.m) if self.c is None else np.asarray(self.c, dtype=float).ravel()
        self.exp_index = np.asarray(self.exp_index, dtype=int).ravel()
        self.exp_weight = np.asarray(self.exp_weight, dtype=float).ravel()
        if self.E is None or np.size(self.E) == 0:
            self.E = np.zeros((0, self.m))
            self.f = np.zeros(0)
        else:
            self.E = np.atleast_2d(np.asarray(self.E, dtype=float))
            self.f = np.asarray(self.f, dtype=float).ravel()

        if self.c.size != self.m:
            raise ValueError(f"目标系数长度 {self.c.size} 与变量个数 {self.m} 不一致")
        if self.exp_index.size != self.exp_weight.size:
            raise ValueError("指数目标项的下标与权重长度不一致")
        if np.any(self.exp_weight < 0):
            raise ValueError("指数目标项的权重必须非负")
        if self.E.shape != (self.f.size, self.m):
            raise ValueError(f"等式约束维度不一致: E{self.E.shape}, f({self.f.size})")
        for atom in self.constraints:
            if atom.m != self.m:
                raise ValueError(f"约束原子的变量个数 {atom.m} 与规划的 {self.m} 不一致")

        positive = set(int(i) for i in self.positive)
        for atom in self.constraints:
            positive.update(int(i) for i in atom.indices())
        if any(i < 0 or i >= self.m for i in positive):
            raise ValueError("正变量下标越界")
        self.positive = np.array(sorted(positive), dtype=int)

    def objective(self, z: np.ndarray):
        """
        目标函数值、梯度与Hessian
        """
        expo = self.exp_weight * np.exp(z[self.exp_index])
        value = float(self.c @ z + np.sum(expo))
        grad = self.c.copy()
        np.add.at(grad, self.exp_index, expo)
        hess = np.zeros((self.m, self.m))
        np.add.at(hess, (self.exp_index, self.exp_index), expo)
        return value, grad, hess
