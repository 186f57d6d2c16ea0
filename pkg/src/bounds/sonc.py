# src/bounds/sonc.py
"""
SONC下界：在对数空间求解电路覆盖对应的几何规划

变量 y_{k,α} = log X_{k,α}（电路k、外点α）。
    每个电路:   Σ_α λ_α (y_{k,α} - log λ_α) = log(share_k·|b_β|)
    每个外点α≠0: log Σ_k exp(y_{k,α} - log b_α) <= 0
    目标:       min Σ_k exp(y_{k,0})，下界为 b_0 - 最优值
"""
import logging
import math
import time
from typing import Dict, List, Tuple

import numpy as np

from ..circuits.circuit import Circuit
from ..circuits.covering import Covering, compute_covering
from ..polycore.errors import UnboundedRelaxation
from ..polycore.polynomial import Polynomial, relax
from ..solver.convex import solve_convex
from ..solver.program import AffineInequality, ConvexProgram, LogSumExpInequality
from .result import BoundResult, check_domain

# 配置日志
logger = logging.getLogger(__name__)


def build_sonc_program(covering: Covering) -> Tuple[ConvexProgram, Dict[Tuple[int, int], int]]:
    """
    由覆盖构造几何规划

    Args:
        covering: 电路覆盖

    Returns:
        (凸规划, {(电路序号, 外点下标): 变量序号})
    """
    q = covering.polynomial
    origin = q.origin_index
    variables: Dict[Tuple[int, int], int] = {}
    for k, circuit in enumerate(covering.circuits):
        for alpha in circuit.outer_indices:
            variables[(k, alpha)] = len(variables)
    m = len(variables)

    E = np.zeros((len(covering.circuits), m))
    f = np.zeros(len(covering.circuits))
    start = np.zeros(m)
    for k, circuit in enumerate(covering.circuits):
        lam = circuit.lambdas
        for alpha, weight in zip(circuit.outer_indices, lam):
            E[k, variables[(k, alpha)]] = weight
        f[k] = math.log(circuit.share * abs(q.b[circuit.inner_index])) + float(np.sum(lam * np.log(lam)))

    constraints = []
    for alpha, users in covering.budget.items():
        log_budget = math.log(q.b[alpha])
        columns = [variables[(k, alpha)] for k in users]
        if len(columns) == 1:
            a = np.zeros(m)
            a[columns[0]] = 1.0
            constraints.append(AffineInequality(m, a, -log_budget))
        else:
            G = np.zeros((len(columns), m))
            G[np.arange(len(columns)), columns] = 1.0
            constraints.append(LogSumExpInequality(G, -log_budget * np.ones(len(columns))))
        for col in columns:
            start[col] = log_budget - math.log(len(columns) + 1)

    exp_index = [variables[(k, origin)] for k, c in enumerate(covering.circuits) if c.has_origin]
    program = ConvexProgram(
        m=m,
        exp_index=exp_index,
        exp_weight=np.ones(len(exp_index)),
        E=E,
        f=f,
        constraints=constraints,
        start=start,
    )
    return program, variables


def sonc_bound(p: Polynomial, domain: str = 'real', strategy: str = None, tol: float = None) -> BoundResult:
    """
    SONC下界

    Args:
        p: 多项式
        domain: real 先做松弛再求界；positive 表示p已是正卦限上的松弛
        strategy: 覆盖策略 simple / extended
        tol: 求解器容差

    Returns:
        BoundResult，覆盖无界或求解失败时 lower_bound = -inf
    """
    check_domain(domain)
    started = time.perf_counter()
    q = relax(p) if domain == 'real' else p

    try:
        covering = compute_covering(q, strategy)
    except UnboundedRelaxation as e:
        logger.warning(f"SONC松弛无界: {e}")
        return BoundResult('sonc', -math.inf, None, 'unbounded', time.perf_counter() - started, q.with_origin(),
                           {'term_index': e.term_index})
    except Exception as e:
        logger.error(f"计算电路覆盖时出错: {e}")
        return BoundResult('sonc', -math.inf, None, 'numerical_failure', time.perf_counter() - started, q.with_origin())

    qo = covering.polynomial
    b0 = qo.constant
    if not covering.circuits:
        return BoundResult('sonc', b0, np.zeros((0, qo.t)), 'optimal', time.perf_counter() - started, qo,
                           {'covering': covering})

    program, variables = build_sonc_program(covering)
    solution = solve_convex(program, tol)
    elapsed = time.perf_counter() - started
    if not solution.optimal:
        logger.warning(f"SONC几何规划求解失败: {solution.status.value}")
        return BoundResult('sonc', -math.inf, None, solution.status.value, elapsed, qo, {'covering': covering})

    X = np.zeros((len(covering.circuits), qo.t))
    for (k, alpha), col in variables.items():
        X[k, alpha] = math.exp(solution.x[col])
    bound = b0 - solution.objective
    logger.debug(f"SONC下界 {bound:.8g} ({len(covering.circuits)} 个电路, {elapsed:.3f}s)")
    return BoundResult('sonc', bound, X, 'optimal', elapsed, qo, {'covering': covering, 'solution': solution})


def sonc_certificate_circuits(result: BoundResult) -> List[Tuple[Circuit, Polynomial]]:
    """
    由SONC证书重组电路多项式

    Args:
        result: sonc_bound 的最优结果

    Returns:
        [(电路, 电路多项式)]，外点系数取X，内点系数取 -share·|b_β|；
        电路多项式沿用原支撑集（其余系数为0），电路中的下标仍然有效
    """
    covering: Covering = result.details.get('covering')
    if covering is None or result.certificate is None:
        return []
    q = result.polynomial
    pieces = []
    for k, circuit in enumerate(covering.circuits):
        b = np.zeros(q.t)
        for alpha in circuit.outer_indices:
            b[alpha] = result.certificate[k, alpha]
        b[circuit.inner_index] = -circuit.share * abs(q.b[circuit.inner_index])
        pieces.append((circuit, q.with_coefficients(b)))
    return pieces
