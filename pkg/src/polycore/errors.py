"""
异常定义 - 多项式解析、维度检查以及松弛无界等错误
"""
from typing import Optional


class PolynomialParseError(ValueError):
    """多项式文本解析失败，position 为出错位置（字符下标）"""

    def __init__(self, message: str, position: Optional[int] = None):
        self.position = position
        if position is not None:
            message = f"{message} (位置 {position})"
        super().__init__(message)


class DimensionMismatchError(ValueError):
    """点的维度与多项式变量个数不一致"""


class UnboundedRelaxation(Exception):
    """某个非平方项不在平方项的凸包内，松弛多项式没有SONC下界"""

    def __init__(self, term_index: int, exponent=None):
        self.term_index = term_index
        self.exponent = exponent
        super().__init__(f"第 {term_index} 项的指数 {exponent} 不在单项式平方的凸包内，松弛无界")


class CircuitDomainError(ValueError):
    """电路数的权重必须为正"""
