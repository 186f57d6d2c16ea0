# src/minima/descent.py
"""
局部下降：带Armijo回溯的BFGS，可选地投影到符号锥上
"""
import logging
from dataclasses import dataclass, field
from typing import List, Optional, Sequence

import numpy as np

from ..app_config import MINIMA_CONFIG
from ..polycore.polynomial import Polynomial

# 配置日志
logger = logging.getLogger(__name__)

ARMIJO_SLOPE = MINIMA_CONFIG.get('armijo_slope', 1e-4)
MAX_BACKTRACKS = MINIMA_CONFIG.get('max_backtracks', 60)
BACKTRACK = MINIMA_CONFIG.get('backtrack', 0.5)


@dataclass
class DescentResult:
    """局部下降的结果，history 记录每个被接受迭代点的函数值"""
    x: np.ndarray
    value: float
    iterations: int
    converged: bool
    history: List[float] = field(default_factory=list)


def project(x: np.ndarray, signs: Optional[np.ndarray]) -> np.ndarray:
    """把固定符号的坐标截断到对应的半轴上"""
    if signs is None:
        return x
    x = x.copy()
    x[(signs > 0) & (x < 0)] = 0.0
    x[(signs < 0) & (x > 0)] = 0.0
    return x


def _projected_gradient(x: np.ndarray, g: np.ndarray, signs: Optional[np.ndarray]) -> np.ndarray:
    """边界上梯度指向锥外的坐标冻结为0"""
    if signs is None:
        return g
    pg = g.copy()
    frozen = (signs != 0) & (x == 0.0) & (signs * g > 0)
    pg[frozen] = 0.0
    return pg


def descend(p: Polynomial, start: Sequence[float], tol: float = None, max_iter: int = None,
            signs: Sequence[int] = None) -> DescentResult:
    """
    BFGS局部下降

    Args:
        p: 多项式
        start: 初始点
        tol: 投影梯度范数的终止容差
        max_iter: 迭代上限
        signs: 可选的符号向量，非零分量对应的坐标被限制在该半轴上

    Returns:
        DescentResult，函数值单调不增
    """
    tol = tol if tol is not None else MINIMA_CONFIG.get('tol', 1e-8)
    max_iter = max_iter if max_iter is not None else MINIMA_CONFIG.get('max_iter', 500)
    signs = None if signs is None else np.asarray(signs, dtype=int).ravel()

    x = project(np.asarray(start, dtype=float).ravel().copy(), signs)
    with np.errstate(all='ignore'):
        fx = p.evaluate(x)
        g = p.gradient(x)
    history = [fx]
    H = np.eye(p.n)

    converged = False
    iterations = 0
    while iterations < max_iter:
        pg = _projected_gradient(x, g, signs)
        if not np.all(np.isfinite(pg)):
            break
        if np.linalg.norm(pg) <= tol:
            converged = True
            break

        d = -H @ pg
        if signs is not None:
            d[(signs != 0) & (x == 0.0) & (signs * g > 0)] = 0.0
        if d @ pg >= 0:
            H = np.eye(p.n)
            d = -pg

        step = 1.0
        accepted = False
        with np.errstate(all='ignore'):
            for _ in range(MAX_BACKTRACKS):
                candidate = project(x + step * d, signs)
                f_new = p.evaluate(candidate)
                if np.isfinite(f_new) and f_new <= fx + ARMIJO_SLOPE * (pg @ (candidate - x)):
                    accepted = True
                    break
                step *= BACKTRACK
        if not accepted or f_new > fx:
            logger.debug(f"线搜索未找到下降步，停止于第 {iterations} 步")
            break

        with np.errstate(all='ignore'):
            g_new = p.gradient(candidate)
        s = candidate - x
        y = g_new - g
        sy = float(s @ y)
        if sy > 1e-12:
            rho = 1.0 / sy
            I = np.eye(p.n)
            H = (I - rho * np.outer(s, y)) @ H @ (I - rho * np.outer(y, s)) + rho * np.outer(s, s)

        x, fx, g = candidate, f_new, g_new
        history.append(fx)
        iterations += 1

    if not converged:
        pg = _projected_gradient(x, g, signs)
        converged = bool(np.all(np.isfinite(pg)) and np.linalg.norm(pg) <= tol)
    return DescentResult(x, float(fx), iterations, converged, history)


def local_min(p: Polynomial, start: Sequence[float], tol: float = None, max_iter: int = None,
              signs: Sequence[int] = None) -> np.ndarray:
    """从start出发做BFGS下降，返回终点"""
    return descend(p, start, tol, max_iter, signs).x
