# src/cli/generator.py
"""
随机多项式生成器

支撑集包含原点和 n 个随机偶数顶点（最大分量为 d，系数为正），其余 t-n-1 个点取自
这些顶点与原点张成的单纯形，保证松弛有界。
"""
import logging
from dataclasses import dataclass
from typing import Optional, Set, Tuple

import numpy as np

from ..app_config import GENERATOR_CONFIG
from ..polycore.polynomial import Polynomial

# 配置日志
logger = logging.getLogger(__name__)

POINT_ATTEMPTS = 2000
VERTEX_ATTEMPTS = 200


@dataclass
class GeneratorSpec:
    """
    生成参数

    Args:
        n: 变量个数
        d: 偶数次数
        t: 项数，至少 n+1
        seed: 随机种子
        coef_low, coef_high: 内部点系数范围
        square_low, square_high: 单项式平方的系数范围
        nonsquare_fraction: 内部点中非平方项所占比例
    """
    n: int
    d: int
    t: int
    seed: int = 0
    coef_low: float = None
    coef_high: float = None
    square_low: float = None
    square_high: float = None
    nonsquare_fraction: float = None

    def __post_init__(self):
        if self.coef_low is None:
            self.coef_low = GENERATOR_CONFIG.get('coef_low', -10.0)
        if self.coef_high is None:
            self.coef_high = GENERATOR_CONFIG.get('coef_high', 10.0)
        if self.square_low is None:
            self.square_low = GENERATOR_CONFIG.get('square_low', 1.0)
        if self.square_high is None:
            self.square_high = GENERATOR_CONFIG.get('square_high', 10.0)
        if self.nonsquare_fraction is None:
            self.nonsquare_fraction = GENERATOR_CONFIG.get('nonsquare_fraction', 1.0)

    def validate(self):
        if self.n < 1:
            raise ValueError(f"变量个数必须为正: {self.n}")
        if self.d < 2 or self.d % 2:
            raise ValueError(f"次数必须是不小于2的偶数: {self.d}")
        if self.t < self.n + 1:
            raise ValueError(f"项数 {self.t} 少于 n+1 = {self.n + 1}，无法放下原点和全部顶点")
        if not 0.0 <= self.nonsquare_fraction <= 1.0:
            raise ValueError(f"非平方项比例必须在 [0, 1] 内: {self.nonsquare_fraction}")
        if self.coef_low >= self.coef_high or self.square_low <= 0 or self.square_low >= self.square_high:
            raise ValueError("系数范围无效")


def _random_vertices(rng: np.random.Generator, n: int, d: int) -> np.ndarray:
    """
    n 个随机偶数顶点（列），每个顶点的最大分量恰为 d，且与原点张成满维单纯形

    Returns:
        n×n 整数矩阵
    """
    for _ in range(VERTEX_ATTEMPTS):
        V = 2 * rng.integers(0, d // 2 + 1, size=(n, n))
        V[rng.integers(0, n, size=n), np.arange(n)] = d
        if abs(np.linalg.det(V)) > 0.5:
            return V
    raise ValueError(f"无法生成 {n} 个次数为 {d} 的仿射无关顶点")


def _in_simplex(V: np.ndarray, point: np.ndarray) -> bool:
    """point 是否在 conv{0, V的列} 内"""
    weights = np.linalg.solve(V, point)
    return bool(np.all(weights >= -1e-12) and np.sum(weights) <= 1.0 + 1e-12)


def _interior_point(rng: np.random.Generator, V: np.ndarray, odd: bool) -> Optional[Tuple[int, ...]]:
    """单纯形内的非零非顶点格点，odd 为真时至少有一个奇数分量，否则全为偶数"""
    n = V.shape[0]
    vertices = {tuple(int(e) for e in V[:, i]) for i in range(n)}
    for _ in range(POINT_ATTEMPTS):
        weights = rng.dirichlet(np.ones(n + 1))[1:]
        point = np.floor(V @ weights).astype(int)
        if not odd:
            point = point - point % 2
        if not point.any() or odd != bool(np.any(point % 2)):
            continue
        key = tuple(int(e) for e in point)
        if key not in vertices and _in_simplex(V, point):
            return key
    return None


def _nonzero_uniform(rng: np.random.Generator, low: float, high: float) -> float:
    for _ in range(POINT_ATTEMPTS):
        value = round(float(rng.uniform(low, high)), 3)
        if value != 0.0:
            return value
    raise ValueError(f"无法在 [{low}, {high}] 中生成非零系数")


def _support(rng: np.random.Generator, spec: GeneratorSpec, nonsquares: int) -> Optional[Tuple[np.ndarray, list]]:
    """一次抽样：顶点与内部点；内部格点不够时返回None"""
    n, d = spec.n, spec.d
    V = _random_vertices(rng, n, d)
    interior = spec.t - n - 1
    used: Set[Tuple[int, ...]] = set()
    points = []
    for k in range(interior):
        odd = k < nonsquares
        for _ in range(POINT_ATTEMPTS):
            point = _interior_point(rng, V, odd)
            if point is None:
                return None
            if point not in used:
                break
        else:
            return None
        used.add(point)
        points.append((point, odd))
    return V, points


def generate_polynomial(spec: GeneratorSpec) -> Polynomial:
    """
    按 GeneratorSpec 生成多项式，固定种子时结果确定

    Raises:
        ValueError: 参数不合法，或多次重抽顶点后内部格点仍不足以放下 t-n-1 个不同的点
    """
    spec.validate()
    rng = np.random.default_rng(spec.seed)
    n, d = spec.n, spec.d
    nonsquares = int(round(spec.nonsquare_fraction * (spec.t - n - 1)))

    for _ in range(VERTEX_ATTEMPTS):
        support = _support(rng, spec, nonsquares)
        if support is not None:
            break
        logger.debug("内部格点不足，重新抽取顶点")
    else:
        raise ValueError(f"次数 {d} 的随机单纯形内没有足够的不同格点放下 {spec.t - n - 1} 个内部项")
    V, points = support

    columns = [np.zeros(n, dtype=int)] + [V[:, i] for i in range(n)]
    coefficients = [_nonzero_uniform(rng, spec.square_low, spec.square_high) for _ in range(n + 1)]
    for point, odd in points:
        columns.append(np.array(point, dtype=int))
        if odd:
            coefficients.append(_nonzero_uniform(rng, spec.coef_low, spec.coef_high))
        else:
            coefficients.append(_nonzero_uniform(rng, spec.square_low, spec.square_high))

    p = Polynomial(np.column_stack(columns), np.array(coefficients))
    logger.debug(f"生成多项式 n={n} d={d} t={p.t} seed={spec.seed}")
    return p
