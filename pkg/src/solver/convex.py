# src/solver/convex.py
"""
对数障碍内点法 - 在等式约束的零空间内做阻尼牛顿迭代

几何规划（对数变换后）和相对熵规划共用同一个求解器。
"""
import logging
from typing import Callable, List, Optional, Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, null_space

from ..app_config import SOLVER_CONFIG
from .program import (AffineInequality, ConstraintAtom, ConvexProgram, SolverSolution,
                      SolverStatus)

# 配置日志
logger = logging.getLogger(__name__)

DEFAULT_TOL = SOLVER_CONFIG.get('tol', 2.0 ** -23)


class _Outcome:
    """一次障碍法求解的内部结果"""

    def __init__(self, z: np.ndarray, status: SolverStatus, t: float, residual: float, iterations: int):
        self.z = z
        self.status = status
        self.t = t
        self.residual = residual
        self.iterations = iterations


class BarrierSolver:
    """
    对数障碍法求解器

    Args:
        tol: 对偶间隙估计 M/t 与平稳性残差的终止容差
        settings: 覆盖SOLVER_CONFIG中的参数
    """

    def __init__(self, tol: float = None, **settings):
        config = dict(SOLVER_CONFIG)
        config.update({k: v for k, v in settings.items() if v is not None})
        self.tol = float(tol if tol is not None else config.get('tol', DEFAULT_TOL))
        self.barrier_factor = float(config.get('barrier_factor', 10.0))
        self.initial_t = float(config.get('initial_t', 1.0))
        self.inner_tol = float(config.get('inner_tol', 1e-10))
        self.max_newton = int(config.get('max_newton', 200))
        self.max_stalls = int(config.get('max_stalls', 50))
        self.armijo_slope = float(config.get('armijo_slope', 1e-4))
        self.backtrack = float(config.get('backtrack', 0.5))
        self.min_step = float(config.get('min_step', 1e-14))
        self.unbounded_threshold = float(config.get('unbounded_threshold', 1e12))
        self.phase_one_box = float(config.get('phase_one_box', 1e4))

    # ------------------------------------------------------------------
    # 障碍函数

    @staticmethod
    def _strictly_feasible(z, atoms: List[ConstraintAtom], positive: np.ndarray) -> bool:
        if positive.size and np.any(z[positive] <= 0):
            return False
        with np.errstate(all='ignore'):
            for atom in atoms:
                value = atom.value(z)
                if not np.isfinite(value) or value >= 0:
                    return False
        return True

    @staticmethod
    def _barrier(z, atoms: List[ConstraintAtom], positive: np.ndarray, derivatives: bool = True):
        """Σ -log(-g_k(z)) - Σ log z_i 及其导数"""
        m = z.size
        value = 0.0
        grad = np.zeros(m)
        hess = np.zeros((m, m))
        for atom in atoms:
            g, dg, d2g = atom.evaluate(z)
            value -= np.log(-g)
            if derivatives:
                grad += dg / (-g)
                hess += d2g / (-g) + np.outer(dg, dg) / g ** 2
        if positive.size:
            zp = z[positive]
            value -= float(np.sum(np.log(zp)))
            if derivatives:
                grad[positive] -= 1.0 / zp
                hess[positive, positive] += 1.0 / zp ** 2
        return value, grad, hess

    def _newton_system(self, objective: Callable, atoms: List[ConstraintAtom], positive: np.ndarray,
                       z: np.ndarray, N: np.ndarray, t: float):
        """零空间坐标下 t·f0 + barrier 的梯度与Hessian"""
        f0, df0, d2f0 = objective(z)
        _, db, d2b = self._barrier(z, atoms, positive)
        grad = N.T @ (t * df0 + db)
        hess = N.T @ (t * d2f0 + d2b) @ N
        return f0, grad, hess

    @staticmethod
    def _newton_direction(H: np.ndarray, g: np.ndarray, ridge: float = 0.0) -> Optional[np.ndarray]:
        """Cholesky求解 (H + ridge·I) d = -g，分解失败时逐步加大正则项"""
        if H.size == 0:
            return np.zeros(0)
        scale = max(1.0, float(np.max(np.abs(np.diag(H)))))
        shift = ridge
        for _ in range(12):
            try:
                factor = cho_factor(H + shift * np.eye(H.shape[0]))
                d = cho_solve(factor, -g)
                if np.all(np.isfinite(d)):
                    return d
            except (LinAlgError, ValueError):
                pass
            shift = 1e-12 * scale if shift == 0.0 else shift * 100.0
        return None

    @staticmethod
    def _next_ridge(ridge: float, H: np.ndarray) -> float:
        """停滞后加大正则项，方向逐渐退化为梯度方向"""
        if ridge == 0.0:
            scale = max(1.0, float(np.max(np.abs(np.diag(H))))) if H.size else 1.0
            return 1e-8 * scale
        return ridge * 10.0

    @staticmethod
    def _relative_step(z: np.ndarray, dz: np.ndarray) -> float:
        """牛顿步长 ‖Δz‖∞ / (1 + ‖z‖∞)"""
        if dz.size == 0:
            return 0.0
        return float(np.max(np.abs(dz))) / (1.0 + float(np.max(np.abs(z))))

    # ------------------------------------------------------------------
    # 主循环

    def _minimize(self, objective: Callable, atoms: List[ConstraintAtom], positive: np.ndarray,
                  z0: np.ndarray, N: np.ndarray, u: np.ndarray,
                  stop: Optional[Callable[[np.ndarray], bool]] = None) -> _Outcome:
        """
        在 z = z0 + N u 上最小化 t·f0(z) + barrier(z)，每阶段居中后 t 乘以 barrier_factor

        阶段居中的条件：牛顿减量不超过 inner_tol，且牛顿步（平稳性残差）不超过 tol。
        居中失败的阶段不再增大 t，直接判为数值失败。

        Args:
            objective: 返回 (值, 梯度, Hessian) 的目标函数
            stop: 可选的提前终止条件（一阶段问题使用）
        """
        M = len(atoms) + positive.size
        t = self.initial_t
        iterations = 0
        stalls = 0
        ridge = 0.0
        residual = np.inf
        # 舍入误差量级，merit 的变化低于它时不再区分
        noise = 64.0 * np.finfo(float).eps

        def merit(z, t_value):
            f0 = objective(z)[0]
            return t_value * f0 + self._barrier(z, atoms, positive, derivatives=False)[0]

        z = z0 + N @ u
        while True:
            centered = False
            for _ in range(self.max_newton):
                f0, grad, hess = self._newton_system(objective, atoms, positive, z, N, t)
                if f0 < -self.unbounded_threshold:
                    logger.debug(f"目标值 {f0:.3e} 低于阈值，判定无界")
                    return _Outcome(z, SolverStatus.UNBOUNDED, t, residual, iterations)
                if stop is not None and stop(z):
                    return _Outcome(z, SolverStatus.OPTIMAL, t, 0.0, iterations)

                direction = self._newton_direction(hess, grad, ridge)
                if direction is None:
                    stalls += 1
                    logger.debug(f"牛顿方程求解失败，连续停滞 {stalls} 次")
                    if stalls >= self.max_stalls:
                        return _Outcome(z, SolverStatus.NUMERICAL_FAILURE, t, residual, iterations)
                    ridge = self._next_ridge(ridge, hess)
                    continue

                decrement = float(max(-grad @ direction, 0.0))
                if ridge == 0.0:
                    residual = self._relative_step(z, N @ direction)
                    if decrement / 2.0 <= self.inner_tol and (residual <= self.tol or decrement <= noise ** 2):
                        centered = True
                        break

                # 回溯线搜索，同时保证严格可行
                current = merit(z, t)
                slope = float(grad @ direction)
                slack = noise * (1.0 + abs(current))
                step = 1.0
                accepted = False
                while step >= self.min_step:
                    candidate = z + step * (N @ direction)
                    if self._strictly_feasible(candidate, atoms, positive):
                        with np.errstate(all='ignore'):
                            value = merit(candidate, t)
                        if np.isfinite(value) and value <= current + self.armijo_slope * step * slope + slack:
                            accepted = True
                            break
                    step *= self.backtrack

                iterations += 1
                if not accepted:
                    stalls += 1
                    logger.debug(f"线搜索失败 (t={t:.3e})，连续停滞 {stalls} 次")
                    if stalls >= self.max_stalls:
                        return _Outcome(z, SolverStatus.NUMERICAL_FAILURE, t, residual, iterations)
                    ridge = self._next_ridge(ridge, hess)
                    continue
                stalls = 0
                ridge = 0.0
                u = u + step * direction
                z = z0 + N @ u

            if not centered:
                logger.debug(f"t={t:.3e} 的阶段在 {self.max_newton} 次牛顿迭代内未居中 (残差={residual:.3e})")
                return _Outcome(z, SolverStatus.NUMERICAL_FAILURE, t, residual, iterations)
            if M == 0 or M / t <= self.tol:
                return _Outcome(z, SolverStatus.OPTIMAL, t, residual, iterations)
            t *= self.barrier_factor
            logger.debug(f"障碍参数更新 t={t:.3e}")

    def _phase_one(self, atoms: List[ConstraintAtom], positive: np.ndarray, z0: np.ndarray,
                   N: np.ndarray, u: np.ndarray, slack_start: float) -> Tuple[Optional[np.ndarray], float, SolverStatus]:
        """
        一阶段：min s, s.t. g_k(z) - s <= 0，s 一旦小于0即得到严格可行点

        正变量和自由变量都限制在 |z_i| <= R 的盒子内，否则障碍项可以沿无穷远方向一直下降。

        Returns:
            (严格可行点或None, s的最终值, 状态)
        """
        m, k = N.shape
        slack_atoms = [atom.with_slack() for atom in atoms]
        N_ext = np.zeros((m + 1, k + 1))
        N_ext[:-1, :k] = N
        N_ext[-1, k] = 1.0
        z0_ext = np.append(z0, 0.0)
        u_ext = np.append(u, slack_start)
        m_ext = m + 1
        # s >= -1，保证一阶段问题有界
        lower = np.zeros(m_ext)
        lower[-1] = -1.0
        slack_atoms.append(AffineInequality(m_ext, lower, -1.0))

        z_start = z0 + N @ u
        radius = self.phase_one_box * (1.0 + float(np.max(np.abs(z_start))))
        positive_set = set(int(i) for i in positive)
        for i in range(m):
            upper = np.zeros(m_ext)
            upper[i] = 1.0
            slack_atoms.append(AffineInequality(m_ext, upper, -radius))
            if i not in positive_set:
                slack_atoms.append(AffineInequality(m_ext, -upper, -radius))

        def slack_objective(z):
            grad = np.zeros(m_ext)
            grad[-1] = 1.0
            return z[-1], grad, np.zeros((m_ext, m_ext))

        outcome = self._minimize(slack_objective, slack_atoms, positive, z0_ext, N_ext, u_ext,
                                 stop=lambda z: z[-1] < 0.0)
        s = float(outcome.z[-1])
        if s < 0.0:
            return outcome.z[:-1], s, SolverStatus.OPTIMAL
        if outcome.status == SolverStatus.NUMERICAL_FAILURE:
            return None, s, SolverStatus.NUMERICAL_FAILURE
        if s > self.tol:
            return None, s, SolverStatus.INFEASIBLE
        # 可行域没有严格内点
        return None, s, SolverStatus.NUMERICAL_FAILURE

    def solve(self, cp: ConvexProgram) -> SolverSolution:
        """
        求解凸规划

        Args:
            cp: 凸规划描述

        Returns:
            SolverSolution，最优时残差均不超过tol
        """
        positive = np.asarray(cp.positive, dtype=int)
        atoms = list(cp.constraints)

        # 等式约束参数化 z = z0 + N u
        if cp.E.shape[0]:
            z0, *_ = np.linalg.lstsq(cp.E, cp.f, rcond=None)
            if np.max(np.abs(cp.E @ z0 - cp.f)) > 1e-8 * (1.0 + np.max(np.abs(cp.f))):
                logger.debug("等式约束不相容")
                return SolverSolution(SolverStatus.INFEASIBLE)
            N = null_space(cp.E)
        else:
            z0 = np.zeros(cp.m)
            N = np.eye(cp.m)

        if cp.start is not None:
            guess = np.asarray(cp.start, dtype=float).ravel()
        else:
            guess = np.zeros(cp.m)
            guess[positive] = 1.0
        u = N.T @ (guess - z0)
        z = z0 + N @ u

        if N.shape[1] == 0:
            # 等式约束唯一确定了点
            feasible = self._strictly_feasible(z, atoms, positive)
            return self._finish(cp, z, SolverStatus.OPTIMAL if feasible else SolverStatus.INFEASIBLE,
                                atoms, positive, np.inf, 0.0, 0)

        # 先让正变量严格为正
        if positive.size and np.any(z[positive] <= 0):
            domain_atoms = []
            for i in positive:
                a = np.zeros(cp.m)
                a[i] = -1.0
                domain_atoms.append(AffineInequality(cp.m, a))
            start = float(np.max(-z[positive])) + 1.0
            z_domain, s, status = self._phase_one(domain_atoms, np.zeros(0, dtype=int), z0, N, u, start)
            if z_domain is None:
                logger.debug(f"正变量约束无严格可行点 (s={s:.3e})")
                return SolverSolution(status)
            u = N.T @ (z_domain - z0)
            z = z0 + N @ u

        if not self._strictly_feasible(z, atoms, positive):
            with np.errstate(all='ignore'):
                worst = max(atom.value(z) for atom in atoms)
            start = (worst if np.isfinite(worst) else 0.0) + 1.0
            z_feasible, s, status = self._phase_one(atoms, positive, z0, N, u, start)
            if z_feasible is None:
                logger.debug(f"一阶段未找到严格可行点 (s={s:.3e}, {status.value})")
                return SolverSolution(status)
            u = N.T @ (z_feasible - z0)

        outcome = self._minimize(cp.objective, atoms, positive, z0, N, u)
        return self._finish(cp, outcome.z, outcome.status, atoms, positive, outcome.t,
                            outcome.residual, outcome.iterations)

    def _finish(self, cp: ConvexProgram, z: np.ndarray, status: SolverStatus, atoms, positive,
                t: float, stationarity: float, iterations: int) -> SolverSolution:
        """计算残差并生成结果，残差超过容差时改判为数值失败"""
        objective = cp.objective(z)[0]
        M = len(atoms) + positive.size
        violation = 0.0
        if cp.E.shape[0]:
            violation = float(np.max(np.abs(cp.E @ z - cp.f)))
        for atom in atoms:
            violation = max(violation, float(atom.value(z)))
        if positive.size:
            violation = max(violation, float(np.max(-z[positive])))
        gap = M / t if M else 0.0

        if status == SolverStatus.OPTIMAL and max(stationarity, violation, gap) > self.tol:
            logger.warning(f"残差超出容差: 平稳性={stationarity:.3e}, 可行性={violation:.3e}, 间隙={gap:.3e}")
            status = SolverStatus.NUMERICAL_FAILURE
        return SolverSolution(status, z, objective, stationarity, max(violation, 0.0), gap, iterations)


def solve_convex(cp: ConvexProgram, tol: float = None, **settings) -> SolverSolution:
    """
    求解凸规划（对数障碍 + 阻尼牛顿）

    Args:
        cp: 凸规划
        tol: 终止容差，默认 2^-23

    Returns:
        SolverSolution
    """
    solution = BarrierSolver(tol, **settings).solve(cp)
    logger.debug(f"凸规划求解完成: 状态={solution.status.value}, 目标值={solution.objective:.6g}, 迭代={solution.iterations}")
    return solution
