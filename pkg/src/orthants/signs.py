# src/orthants/signs.py
"""
符号向量、符号锥上的正负点划分与松弛
"""
from dataclasses import dataclass
from typing import Iterable, Tuple

import numpy as np

from ..polycore.errors import DimensionMismatchError
from ..polycore.polynomial import Polynomial

_SYMBOLS = {1: '+', -1: '-', 0: '0'}


@dataclass(frozen=True)
class SignVector:
    """
    符号向量 s ∈ {-1,0,+1}^n，0表示该变量符号未定；全零向量表示整个 R^n
    """
    entries: Tuple[int, ...]

    def __post_init__(self):
        entries = tuple(int(e) for e in self.entries)
        if not entries:
            raise ValueError("符号向量不能为空")
        if any(e not in (-1, 0, 1) for e in entries):
            raise ValueError(f"符号向量的分量只能是 -1、0、1: {entries}")
        object.__setattr__(self, 'entries', entries)

    @classmethod
    def zeros(cls, n: int) -> 'SignVector':
        return cls((0,) * n)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> 'SignVector':
        """卦限的0/1编码：0对应+，1对应-"""
        return cls(tuple(1 if bit == 0 else -1 for bit in bits))

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def depth(self) -> int:
        return sum(1 for e in self.entries if e != 0)

    @property
    def is_full(self) -> bool:
        return all(e != 0 for e in self.entries)

    def undetermined(self) -> Tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.entries) if e == 0)

    def with_sign(self, i: int, sign: int) -> 'SignVector':
        entries = list(self.entries)
        entries[i] = sign
        return SignVector(tuple(entries))

    def negated(self) -> 'SignVector':
        return SignVector(tuple(-e for e in self.entries))

    def as_array(self) -> np.ndarray:
        return np.array(self.entries, dtype=int)

    def __len__(self) -> int:
        return len(self.entries)

    def __iter__(self):
        return iter(self.entries)

    def __getitem__(self, i):
        return self.entries[i]

    def __str__(self) -> str:
        return '(' + ','.join(_SYMBOLS[e] for e in self.entries) + ')'


def _as_signs(p: Polynomial, s) -> np.ndarray:
    signs = s.as_array() if isinstance(s, SignVector) else np.asarray(s, dtype=int).ravel()
    if signs.size != p.n:
        raise DimensionMismatchError(f"符号向量长度 {signs.size} 与变量个数 {p.n} 不一致")
    return signs


def positive_points(p: Polynomial, s) -> Tuple[int, ...]:
    """
    符号锥上的正点：sgn(b_j)·Π_i s_i^{A_ij mod 2} = 1（约定 0^0 = 1）

    Args:
        p: 多项式
        s: 符号向量

    Returns:
        正点下标
    """
    signs = _as_signs(p, s)
    parity = p.A % 2
    factor = np.prod(np.where(parity == 1, signs[:, None], 1), axis=0)
    return tuple(int(j) for j in np.flatnonzero(np.sign(p.b) * factor == 1))


def negative_points(p: Polynomial, s) -> Tuple[int, ...]:
    positive = set(positive_points(p, s))
    return tuple(j for j in range(p.t) if j not in positive)


def relax_signed(p: Polynomial, s) -> Polynomial:
    """
    符号锥上的松弛：先代换 x_i -> s_i·x_i 把锥映到正卦限，再把负点的系数取为 -|b_j|

    Args:
        p: 多项式
        s: 符号向量，全零时等价于 relax(p)

    Returns:
        正卦限上的松弛多项式
    """
    signs = _as_signs(p, s)
    substituted = p.substitute_signs(signs)
    b = substituted.b.copy()
    negative = list(negative_points(p, signs))
    b[negative] = -np.abs(b[negative])
    return substituted.with_coefficients(b)
