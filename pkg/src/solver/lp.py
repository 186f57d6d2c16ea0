# src/solver/lp.py
"""
两阶段单纯形法（Bland规则），求解标准形线性规划
"""
import logging
from typing import List, Optional

import numpy as np

from ..app_config import LP_CONFIG
from .program import LinearProgram, SolverSolution, SolverStatus

# 配置日志
logger = logging.getLogger(__name__)


class _PivotFailure(Exception):
    pass


class SimplexTableau:
    """
    单纯形表，最后一列为右端项，最后一行为既约费用

    Args:
        A: 约束矩阵
        b: 非负右端项
        basis: 初始基变量下标
        pivot_tol: 主元绝对值下限
    """

    def __init__(self, A: np.ndarray, b: np.ndarray, basis: List[int], pivot_tol: float):
        rows, cols = A.shape
        self.table = np.zeros((rows + 1, cols + 1))
        self.table[:rows, :cols] = A
        self.table[:rows, -1] = b
        self.basis = list(basis)
        self.pivot_tol = pivot_tol
        self.iterations = 0

    @property
    def rows(self) -> int:
        return self.table.shape[0] - 1

    def set_objective(self, c: np.ndarray):
        """写入目标并按当前基消去，得到既约费用"""
        self.table[-1, :] = 0.0
        self.table[-1, :c.size] = c
        for r, j in enumerate(self.basis):
            if self.table[-1, j] != 0.0:
                self.table[-1, :] -= self.table[-1, j] * self.table[r, :]

    def pivot(self, r: int, j: int):
        element = self.table[r, j]
        if abs(element) < self.pivot_tol:
            raise _PivotFailure(f"主元 {element:.3e} 过小")
        self.table[r, :] /= element
        for k in range(self.table.shape[0]):
            if k != r and self.table[k, j] != 0.0:
                self.table[k, :] -= self.table[k, j] * self.table[r, :]
        self.basis[r] = j
        self.iterations += 1
        logger.debug(f"单纯形换基: 第{r}行 -> 变量{j}")

    def run(self, allowed: int, max_iter: int, opt_tol: float) -> SolverStatus:
        """
        Bland规则迭代：入基取下标最小的负既约费用列，出基比值相同时取基变量下标最小者

        Args:
            allowed: 允许入基的列数（前allowed列）
            max_iter: 迭代上限
            opt_tol: 既约费用的最优性容差
        """
        while True:
            if self.iterations >= max_iter:
                return SolverStatus.NUMERICAL_FAILURE
            costs = self.table[-1, :allowed]
            candidates = np.flatnonzero(costs < -opt_tol)
            if candidates.size == 0:
                return SolverStatus.OPTIMAL
            j = int(candidates[0])

            column = self.table[:-1, j]
            rhs = self.table[:-1, -1]
            leaving: Optional[int] = None
            best_ratio = np.inf
            tiny_entry = False
            for r in range(self.rows):
                if column[r] > self.pivot_tol:
                    ratio = max(rhs[r], 0.0) / column[r]
                    if ratio < best_ratio - 1e-12 or (abs(ratio - best_ratio) <= 1e-12 and self.basis[r] < self.basis[leaving]):
                        best_ratio = ratio
                        leaving = r
                elif column[r] > 0.0:
                    tiny_entry = True
            if leaving is None:
                return SolverStatus.NUMERICAL_FAILURE if tiny_entry else SolverStatus.UNBOUNDED
            self.pivot(leaving, j)


def solve_lp(lp: LinearProgram, pivot_tol: float = None, feasibility_tol: float = None,
             max_iter: int = None) -> SolverSolution:
    """
    求解 min c·x, E x = f, x >= 0

    Args:
        lp: 线性规划
        pivot_tol: 主元下限，默认取LP_CONFIG
        feasibility_tol: 一阶段最优值的可行性容差
        max_iter: 每个阶段的迭代上限

    Returns:
        SolverSolution，最优时x为基可行解
    """
    pivot_tol = pivot_tol if pivot_tol is not None else LP_CONFIG.get('pivot_tol', 1e-12)
    feasibility_tol = feasibility_tol if feasibility_tol is not None else LP_CONFIG.get('feasibility_tol', 1e-9)
    rows, m = lp.E.shape
    if max_iter is None:
        max_iter = int(LP_CONFIG.get('max_iter_factor', 50)) * (rows + m + 1)

    if rows == 0:
        if np.any(lp.c < 0):
            return SolverSolution(SolverStatus.UNBOUNDED)
        return SolverSolution(SolverStatus.OPTIMAL, np.zeros(m), 0.0, 0.0, 0.0, 0.0)

    # 右端项取非负
    E = lp.E.copy()
    f = lp.f.copy()
    negative_rows = f < 0
    E[negative_rows] *= -1
    f[negative_rows] *= -1

    try:
        # 一阶段：最小化人工变量之和
        tableau = SimplexTableau(np.hstack([E, np.eye(rows)]), f, list(range(m, m + rows)), pivot_tol)
        tableau.set_objective(np.concatenate([np.zeros(m), np.ones(rows)]))
        status = tableau.run(m + rows, max_iter, pivot_tol)
        if status != SolverStatus.OPTIMAL:
            logger.warning(f"单纯形一阶段未正常结束: {status.value}")
            return SolverSolution(SolverStatus.NUMERICAL_FAILURE, iterations=tableau.iterations)
        if -tableau.table[-1, -1] > feasibility_tol * (1.0 + np.abs(f).sum()):
            logger.debug(f"线性规划不可行，一阶段最优值 {-tableau.table[-1, -1]:.3e}")
            return SolverSolution(SolverStatus.INFEASIBLE, iterations=tableau.iterations)

        # 把仍在基中的人工变量换出，无法换出的行是冗余行
        redundant = []
        for r in range(rows):
            if tableau.basis[r] < m:
                continue
            row = tableau.table[r, :m]
            pivots = np.flatnonzero(np.abs(row) > pivot_tol)
            if pivots.size:
                tableau.pivot(r, int(pivots[0]))
            else:
                redundant.append(r)
        if redundant:
            logger.debug(f"删除冗余约束行: {redundant}")
            keep = [r for r in range(rows) if r not in redundant]
            tableau.table = np.vstack([tableau.table[keep], tableau.table[-1:]])
            tableau.basis = [tableau.basis[r] for r in keep]

        # 二阶段：删去人工变量列
        tableau.table = np.hstack([tableau.table[:, :m], tableau.table[:, -1:]])
        tableau.set_objective(lp.c)
        status = tableau.run(m, tableau.iterations + max_iter, pivot_tol)
    except _PivotFailure as e:
        logger.warning(f"单纯形法数值失败: {e}")
        return SolverSolution(SolverStatus.NUMERICAL_FAILURE)

    if status != SolverStatus.OPTIMAL:
        return SolverSolution(status, iterations=tableau.iterations)

    x = np.zeros(m)
    for r, j in enumerate(tableau.basis):
        x[j] = max(tableau.table[r, -1], 0.0)
    residual = float(np.max(np.abs(lp.E @ x - lp.f))) if rows else 0.0
    return SolverSolution(SolverStatus.OPTIMAL, x, float(lp.c @ x), 0.0, residual, 0.0, tableau.iterations)
