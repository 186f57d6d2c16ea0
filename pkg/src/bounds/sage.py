# src/bounds/sage.py
"""
SAGE下界：相对熵规划

每个负项i对应一个AGE函数，其正支撑限制在包含α_i的牛顿多胞形最小面J_i上。
    Σ_{j∈J_i} ν_j (α_j - α_i) = 0
    D(ν, e·x^{(i)}) <= b_i                  (b_i < 0)
    Σ_i x^{(i)}_j <= b_j                      (j ≠ 0)
    目标 min Σ_i x^{(i)}_0，下界为 b_0 - 最优值
"""
import logging
import math
import time
from typing import Dict, List, Optional, Tuple

import numpy as np

from ..circuits.covering import inner_terms, outer_candidates
from ..polycore.polynomial import Polynomial, relax
from ..solver.convex import solve_convex
from ..solver.lp import solve_lp
from ..solver.program import AffineInequality, ConvexProgram, LinearProgram, RelativeEntropyInequality
from .result import BoundResult, check_domain

# 配置日志
logger = logging.getLogger(__name__)

# 初始点中对数值的上限，避免 exp 溢出
MAX_LOG_START = 50.0


def minimal_face(p: Polynomial, inner: int, candidates: List[int]) -> Tuple[List[int], Optional[np.ndarray]]:
    """
    求外点候选中构成包含α_i的最小面的那些点

    线性规划: max Σ τ_j,  Σ μ_j (α_j - α_i) = 0,  μ_j >= τ_j,  0 <= τ_j <= 1。
    最优解中 τ_j = 1 的点恰好张成最小面。

    Returns:
        (面上的外点下标, 对应的正权重μ)；α_i不在凸包内时返回 ([], None)
    """
    k = len(candidates)
    n = p.n
    diff = p.A[:, candidates].astype(float) - p.A[:, [inner]].astype(float)
    # 变量顺序: μ (k), τ (k), s1 = μ - τ (k), s2 = 1 - τ (k)
    E = np.zeros((n + 2 * k, 4 * k))
    f = np.zeros(n + 2 * k)
    E[:n, :k] = diff
    eye = np.eye(k)
    E[n:n + k, :k] = eye
    E[n:n + k, k:2 * k] = -eye
    E[n:n + k, 2 * k:3 * k] = -eye
    E[n + k:, k:2 * k] = eye
    E[n + k:, 3 * k:] = eye
    f[n + k:] = 1.0
    c = np.zeros(4 * k)
    c[k:2 * k] = -1.0

    solution = solve_lp(LinearProgram(c, E, f))
    if not solution.optimal:
        raise RuntimeError(f"第 {inner} 项的最小面线性规划求解失败: {solution.status.value}")
    tau = solution.x[k:2 * k]
    face = [candidates[j] for j in range(k) if tau[j] > 0.5]
    if not face:
        return [], None
    mu = np.array([solution.x[j] for j in range(k) if tau[j] > 0.5])
    return face, mu


def build_sage_program(q: Polynomial, faces: Dict[int, Tuple[List[int], np.ndarray]]):
    """
    构造相对熵规划

    初始点：非原点的x取各自预算的 1/(使用次数+1)；原点的x取到使 AGE 约束留出 |b_i| 的余量；
    ν = λ·μ̂（μ̂为重心坐标），λ 取使相对熵最小的倍数，此时 D(ν, e·x) = -λ。

    Args:
        q: 补齐原点的多项式
        faces: {负项下标: (面上外点, 重心权重μ)}

    Returns:
        (凸规划, {(负项, 外点): (ν变量, x变量)})
    """
    origin = q.origin_index
    variables: Dict[Tuple[int, int], Tuple[int, int]] = {}
    for i, (face, _) in faces.items():
        for j in face:
            base = 2 * len(variables)
            variables[(i, j)] = (base, base + 1)
    m = 2 * len(variables)

    usage: Dict[int, List[int]] = {}
    for (i, j), (_, xv) in variables.items():
        if j != origin:
            usage.setdefault(j, []).append(xv)

    start = np.ones(m)
    constraints = []
    for j, columns in usage.items():
        a = np.zeros(m)
        a[columns] = 1.0
        constraints.append(AffineInequality(m, a, -float(q.b[j])))
        start[columns] = q.b[j] / (len(columns) + 1)

    E_rows = []
    for i, (face, mu) in faces.items():
        nu_idx = [variables[(i, j)][0] for j in face]
        x_idx = [variables[(i, j)][1] for j in face]
        for row in range(q.n):
            coefficients = np.zeros(m)
            coefficients[nu_idx] = q.A[row, face] - q.A[row, i]
            if np.any(coefficients):
                E_rows.append(coefficients)
        constraints.append(RelativeEntropyInequality(m, nu_idx, x_idx, h=-float(q.b[i])))

        weights = mu / float(np.sum(mu))
        log_target = math.log(2.0 * abs(float(q.b[i])))
        log_product = 0.0
        for j, w, xv in zip(face, weights, x_idx):
            if j != origin:
                log_product += w * math.log(start[xv] / w)
        if origin in face:
            k = face.index(origin)
            exponent = min((log_target - log_product) / weights[k], MAX_LOG_START)
            start[x_idx[k]] = weights[k] * math.exp(exponent)
        log_scale = float(np.sum(weights * (np.log(start[x_idx]) - np.log(weights))))
        start[nu_idx] = math.exp(min(log_scale, MAX_LOG_START)) * weights

    c = np.zeros(m)
    for (i, j), (_, xv) in variables.items():
        if j == origin:
            c[xv] = 1.0

    E = np.array(E_rows) if E_rows else None
    f = np.zeros(len(E_rows)) if E_rows else None
    program = ConvexProgram(m=m, c=c, E=E, f=f, constraints=constraints, start=start)
    return program, variables


def sage_bound(p: Polynomial, domain: str = 'real', tol: float = None) -> BoundResult:
    """
    SAGE下界

    Args:
        p: 多项式
        domain: real 先做松弛再求界；positive 表示p已是正卦限上的松弛
        tol: 求解器容差

    Returns:
        BoundResult，certificate 为 {'X': t×t, 'nu': t×t}
    """
    check_domain(domain)
    started = time.perf_counter()
    q = (relax(p) if domain == 'real' else p).with_origin()
    b0 = q.constant
    negatives = inner_terms(q)
    if not negatives:
        return BoundResult('sage', b0, {'X': np.zeros((q.t, q.t)), 'nu': np.zeros((q.t, q.t))}, 'optimal',
                           time.perf_counter() - started, q)

    candidates = outer_candidates(q)
    faces = {}
    try:
        for i in negatives:
            face, mu = minimal_face(q, i, candidates)
            if not face:
                logger.warning(f"第 {i} 项不在正项的凸包内，SAGE松弛无界")
                return BoundResult('sage', -math.inf, None, 'unbounded', time.perf_counter() - started, q,
                                   {'term_index': i})
            faces[i] = (face, mu)
    except Exception as e:
        logger.error(f"计算最小面时出错: {e}")
        return BoundResult('sage', -math.inf, None, 'numerical_failure', time.perf_counter() - started, q)

    program, variables = build_sage_program(q, faces)
    solution = solve_convex(program, tol)
    elapsed = time.perf_counter() - started
    if not solution.optimal:
        logger.warning(f"SAGE相对熵规划求解失败: {solution.status.value}")
        return BoundResult('sage', -math.inf, None, solution.status.value, elapsed, q)

    X = np.zeros((q.t, q.t))
    nu = np.zeros((q.t, q.t))
    for (i, j), (nv, xv) in variables.items():
        nu[i, j] = solution.x[nv]
        X[i, j] = solution.x[xv]
    bound = b0 - solution.objective
    logger.debug(f"SAGE下界 {bound:.8g} ({len(negatives)} 个AGE, {elapsed:.3f}s)")
    return BoundResult('sage', bound, {'X': X, 'nu': nu}, 'optimal', elapsed, q,
                       {'faces': {i: face for i, (face, _) in faces.items()}, 'solution': solution})
