# src/orthants/minimal.py
"""
有效符号与最小卦限的枚举
"""
import itertools
import logging
from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np

from ..app_config import ORTHANT_CONFIG
from ..polycore.polynomial import Polynomial, classify_support
from .signs import SignVector

# 配置日志
logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class EffectiveSigns:
    """
    某个卦限上各项的有效符号

    Args:
        v: 长度为t的0/1向量，1表示该项在此卦限上有效为负
        bits: 卦限的0/1编码（0对应+，1对应-），x0在最前
        columns: 参与偏序比较的非平方项下标
    """
    v: Tuple[int, ...]
    bits: Tuple[int, ...]
    columns: Tuple[int, ...]

    @property
    def restricted(self) -> Tuple[int, ...]:
        return tuple(self.v[j] for j in self.columns)

    @property
    def orthant(self) -> SignVector:
        return SignVector.from_bits(self.bits)


def effective_signs(p: Polynomial, bits: Sequence[int], columns: Sequence[int] = None) -> EffectiveSigns:
    """v = (bits·A + neg(b)) mod 2"""
    bits = tuple(int(bit) for bit in bits)
    if columns is None:
        columns = classify_support(p).nosq
    negative = (p.b < 0).astype(int)
    v = (np.asarray(bits, dtype=int) @ p.A + negative) % 2
    return EffectiveSigns(tuple(int(e) for e in v), bits, tuple(columns))


def _dominates(lower: Tuple[int, ...], upper: Tuple[int, ...]) -> bool:
    return all(a <= b for a, b in zip(lower, upper))


def minimal_orthants(p: Polynomial, max_variables: int = None) -> List[Tuple[EffectiveSigns, SignVector]]:
    """
    枚举最小卦限

    按二进制计数（x0为最高位）遍历全部卦限。偏序比较的是非平方项上的有效系数符号，
    有效为负的项越多系数向量越小，因此保留的是有效负号向量v的极大元；相同的向量保留最先出现的卦限。

    Args:
        p: 多项式
        max_variables: 变量个数上限

    Returns:
        [(有效符号, 卦限符号向量)]，按发现顺序
    """
    max_variables = max_variables if max_variables is not None else ORTHANT_CONFIG.get('max_variables', 15)
    if p.n > max_variables:
        raise ValueError(f"变量个数 {p.n} 超过最小卦限枚举的上限 {max_variables}")

    columns = classify_support(p).nosq
    antichain: List[Tuple[Tuple[int, ...], EffectiveSigns]] = []
    for bits in itertools.product((0, 1), repeat=p.n):
        signs = effective_signs(p, bits, columns)
        coefficient = tuple(1 - e for e in signs.restricted)
        if any(_dominates(kept, coefficient) for kept, _ in antichain):
            continue
        antichain = [(kept, entry) for kept, entry in antichain if not _dominates(coefficient, kept)]
        antichain.append((coefficient, signs))

    result = [(entry, entry.orthant) for _, entry in antichain]
    logger.debug(f"最小卦限: {[str(s) for _, s in result]} (共 {2 ** p.n} 个卦限)")
    return result
