# src/bounds/result.py
"""
下界计算结果
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

from ..polycore.polynomial import Polynomial

DOMAINS = ('real', 'positive')


@dataclass
class BoundResult:
    """
    下界结果

    Args:
        method: sonc / sage / fork / both
        lower_bound: 下界，失败时为 -inf
        certificate: 求解得到的证书（SONC为电路×项的X矩阵，SAGE为X与ν矩阵）
        solver_status: 求解状态字符串
        wall_time: 耗时（秒）
        polynomial: 实际求界的多项式（松弛后、补齐原点）
        details: 其他附加信息，例如覆盖或卦限列表
    """
    method: str
    lower_bound: float
    certificate: Optional[Any] = None
    solver_status: str = 'optimal'
    wall_time: float = 0.0
    polynomial: Optional[Polynomial] = None
    details: Dict[str, Any] = field(default_factory=dict)

    @property
    def optimal(self) -> bool:
        return self.solver_status == 'optimal' and math.isfinite(self.lower_bound)

    @property
    def failed(self) -> bool:
        return self.lower_bound == -math.inf

    def to_dict(self) -> Dict[str, Any]:
        return {
            'method': self.method,
            'lower_bound': self.lower_bound,
            'status': self.solver_status,
            'wall_time': self.wall_time,
        }


def check_domain(domain: str):
    if domain not in DOMAINS:
        raise ValueError(f"未知的定义域: {domain}，可选 {DOMAINS}")
