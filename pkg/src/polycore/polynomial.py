# src/polycore/polynomial.py
"""
稀疏多项式表示 - 指数矩阵A(n×t)加系数向量b

多项式由 (A, b) 唯一确定，第j列是第j项的指数向量。构造后不可变，
项按分级字典序排列，相同指数的项在构造时合并。
"""
import logging
from dataclasses import dataclass
from typing import Any, Dict, Iterable, Optional, Sequence, Tuple

import numpy as np

from .errors import DimensionMismatchError

# 配置日志
logger = logging.getLogger(__name__)

# 合并后绝对值低于该阈值的系数视为零
ZERO_COEFFICIENT_TOL = 1e-12


@dataclass(frozen=True)
class SupportClassification:
    """支撑集分类：单项式平方(mosq)与其余项(nosq)的下标"""
    mosq: Tuple[int, ...]
    nosq: Tuple[int, ...]


def _graded_lex_key(column: Tuple[int, ...]):
    return (sum(column), column)


class Polynomial:
    """
    稀疏多项式 p(x) = Σ_j b_j · Π_i x_i^{A_ij}

    Args:
        A: n×t 非负整数指数矩阵，每列一个单项式
        b: 长度为t的系数向量
        n: 变量个数，缺省时取A的行数
        keep_origin: 为True时总是保留常数项（可能为零的合成常数项）
    """

    def __init__(self, A, b, n: Optional[int] = None, keep_origin: bool = False):
        A = np.asarray(A)
        b = np.asarray(b, dtype=float).ravel()
        if A.size == 0:
            A = np.zeros((n or 1, 0), dtype=int)
        elif A.ndim == 1:
            # 一维输入视为单变量多项式的指数行
            A = A.reshape(1, -1)
        if n is None:
            n = A.shape[0]
        if n < 1:
            raise ValueError("多项式至少需要一个变量")
        if A.shape != (n, b.size):
            raise DimensionMismatchError(f"指数矩阵形状 {A.shape} 与系数个数 {b.size}、变量个数 {n} 不一致")
        if not np.all(np.isfinite(b)):
            raise ValueError("系数必须是有限实数")
        if A.size and (np.any(A < 0) or np.any(A != np.round(A))):
            raise ValueError("指数必须是非负整数")

        # 合并同类项
        merged: Dict[Tuple[int, ...], float] = {}
        for j in range(b.size):
            key = tuple(int(e) for e in A[:, j])
            merged[key] = merged.get(key, 0.0) + float(b[j])

        origin = (0,) * n
        terms = {k: v for k, v in merged.items() if abs(v) >= ZERO_COEFFICIENT_TOL}
        if keep_origin or not terms:
            terms.setdefault(origin, 0.0)

        columns = sorted(terms, key=_graded_lex_key)
        self._set_state(
            np.array(columns, dtype=int).T.reshape(n, len(columns)),
            np.array([terms[c] for c in columns], dtype=float),
        )

    @classmethod
    def _from_canonical(cls, A: np.ndarray, b: np.ndarray) -> 'Polynomial':
        """跳过规范化，直接由已规范的 (A, b) 构造（内部使用）"""
        poly = cls.__new__(cls)
        poly._set_state(np.array(A, dtype=int), np.array(b, dtype=float))
        return poly

    def _set_state(self, A: np.ndarray, b: np.ndarray):
        A.setflags(write=False)
        b.setflags(write=False)
        self._A = A
        self._b = b
        zero_columns = np.flatnonzero(~A.any(axis=0))
        self._origin_index = int(zero_columns[0]) if zero_columns.size else None

    # ------------------------------------------------------------------
    # 基本属性

    @property
    def A(self) -> np.ndarray:
        return self._A

    @property
    def b(self) -> np.ndarray:
        return self._b

    @property
    def n(self) -> int:
        return self._A.shape[0]

    @property
    def t(self) -> int:
        return self._A.shape[1]

    @property
    def origin_index(self) -> Optional[int]:
        return self._origin_index

    @property
    def degree(self) -> int:
        return int(self._A.sum(axis=0).max()) if self.t else 0

    @property
    def constant(self) -> float:
        """常数项系数，没有常数项时为0"""
        return float(self._b[self._origin_index]) if self._origin_index is not None else 0.0

    def exponent(self, j: int) -> Tuple[int, ...]:
        return tuple(int(e) for e in self._A[:, j])

    # ------------------------------------------------------------------
    # 求值与求导

    def _check_point(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float).ravel()
        if x.size != self.n:
            raise DimensionMismatchError(f"点的维度 {x.size} 与变量个数 {self.n} 不一致")
        return x

    def evaluate(self, x) -> float:
        """逐项计算 Σ_j b_j Π_i x_i^{A_ij}"""
        x = self._check_point(x)
        monomials = np.prod(x[:, None] ** self._A, axis=0)
        return float(monomials @ self._b)

    __call__ = evaluate

    def evaluate_many(self, X) -> np.ndarray:
        """
        批量求值

        Args:
            X: m×n 的点矩阵，每行一个点

        Returns:
            长度为m的函数值向量
        """
        X = np.atleast_2d(np.asarray(X, dtype=float))
        if X.shape[1] != self.n:
            raise DimensionMismatchError(f"点的维度 {X.shape[1]} 与变量个数 {self.n} 不一致")
        monomials = np.prod(X[:, :, None] ** self._A[None, :, :], axis=1)
        return monomials @ self._b

    def gradient(self, x) -> np.ndarray:
        """稀疏形式的精确偏导数"""
        x = self._check_point(x)
        powers = x[:, None] ** self._A
        grad = np.zeros(self.n)
        for i in range(self.n):
            exps = self._A[i]
            mask = exps > 0
            if not mask.any():
                continue
            others = np.prod(np.delete(powers, i, axis=0)[:, mask], axis=0)
            grad[i] = np.sum(self._b[mask] * exps[mask] * x[i] ** (exps[mask] - 1) * others)
        return grad

    # ------------------------------------------------------------------
    # 变换

    def with_coefficients(self, b) -> 'Polynomial':
        """保持支撑集不变，替换系数"""
        b = np.asarray(b, dtype=float).ravel()
        if b.size != self.t:
            raise DimensionMismatchError(f"系数个数 {b.size} 与项数 {self.t} 不一致")
        return Polynomial._from_canonical(self._A, b)

    def with_origin(self) -> 'Polynomial':
        """支撑集不含原点时补一个系数为0的合成常数项"""
        if self._origin_index is not None:
            return self
        return Polynomial(self._A, self._b, self.n, keep_origin=True)

    def scale(self, c: float) -> 'Polynomial':
        return self.with_coefficients(self._b * float(c))

    def substitute_signs(self, signs: Sequence[int]) -> 'Polynomial':
        """代换 x_i -> s_i·x_i（s_i=0 表示该变量不变）"""
        s = np.asarray(signs, dtype=int).ravel()
        if s.size != self.n:
            raise DimensionMismatchError(f"符号向量长度 {s.size} 与变量个数 {self.n} 不一致")
        base = np.where(s == 0, 1, s)[:, None]
        factor = np.prod(base ** (self._A % 2), axis=0)
        return self.with_coefficients(self._b * factor)

    # ------------------------------------------------------------------
    # 序列化

    def to_json(self) -> Dict[str, Any]:
        return {
            'n': self.n,
            'A': [list(self.exponent(j)) for j in range(self.t)],
            'b': [float(v) for v in self._b],
        }

    @classmethod
    def from_json(cls, data: Dict[str, Any]) -> 'Polynomial':
        try:
            n = int(data['n'])
            rows = data['A']
            b = data['b']
        except (KeyError, TypeError) as e:
            raise ValueError(f"多项式JSON缺少字段: {e}")
        if len(rows) != len(b):
            raise ValueError(f"A的行数 {len(rows)} 与b的长度 {len(b)} 不一致")
        A = np.array(rows, dtype=float).reshape(len(rows), n).T if rows else np.zeros((n, 0))
        return cls(A, b, n)

    def _format_term(self, j: int) -> str:
        coef = abs(float(self._b[j]))
        factors = []
        for i, e in enumerate(self.exponent(j)):
            if e == 1:
                factors.append(f"x{i}")
            elif e > 1:
                factors.append(f"x{i}^{e}")
        if not factors:
            return repr(coef)
        if coef == 1.0:
            return '*'.join(factors)
        return '*'.join([repr(coef)] + factors)

    def __str__(self) -> str:
        parts = []
        for j in range(self.t):
            if self._b[j] == 0.0 and self.t > 1:
                continue
            sign = '-' if self._b[j] < 0 else '+'
            term = self._format_term(j)
            if not parts:
                parts.append(f"-{term}" if sign == '-' else term)
            else:
                parts.append(f"{sign} {term}")
        return ' '.join(parts)

    def __repr__(self) -> str:
        return f"Polynomial(n={self.n}, t={self.t}, '{self}')"

    def __eq__(self, other) -> bool:
        if not isinstance(other, Polynomial):
            return NotImplemented
        return (self._A.shape == other._A.shape
                and np.array_equal(self._A, other._A)
                and np.array_equal(self._b, other._b))

    def __hash__(self) -> int:
        return hash((self._A.shape, self._A.tobytes(), self._b.tobytes()))


def classify_support(p: Polynomial) -> SupportClassification:
    """单项式平方：系数为正且指数全为偶数"""
    even = ~np.any(p.A % 2, axis=0)
    square = even & (p.b > 0)
    return SupportClassification(
        mosq=tuple(int(j) for j in np.flatnonzero(square)),
        nosq=tuple(int(j) for j in np.flatnonzero(~square)),
    )


def relax(p: Polynomial) -> Polynomial:
    """非平方项的系数统一取 -|b_j|"""
    classification = classify_support(p)
    b = p.b.copy()
    nosq = list(classification.nosq)
    b[nosq] = -np.abs(b[nosq])
    return p.with_coefficients(b)


def polynomial_from_terms(terms: Iterable[Tuple[float, Dict[int, int]]], n: Optional[int] = None) -> Polynomial:
    """
    由 (系数, {变量下标: 指数}) 序列构造多项式

    Args:
        terms: 项列表
        n: 变量个数，缺省为出现过的最大下标加一

    Returns:
        规范化后的多项式
    """
    terms = list(terms)
    max_index = max((i for _, powers in terms for i in powers), default=0)
    n = max(n or 0, max_index + 1)
    A = np.zeros((n, len(terms)), dtype=int)
    b = np.zeros(len(terms))
    for j, (coef, powers) in enumerate(terms):
        b[j] = coef
        for i, e in powers.items():
            A[i, j] += e
    return Polynomial(A, b, n)
