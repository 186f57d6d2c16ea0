"""
多项式核心模块，负责稀疏表示、解析与序列化、求值求导以及单项式平方分类
"""
from .errors import CircuitDomainError, DimensionMismatchError, PolynomialParseError, UnboundedRelaxation
from .parser import load_polynomial, parse_polynomial, save_polynomial, serialize_polynomial
from .polynomial import Polynomial, SupportClassification, classify_support, polynomial_from_terms, relax

__all__ = [
    'Polynomial',
    'SupportClassification',
    'classify_support',
    'relax',
    'polynomial_from_terms',
    'parse_polynomial',
    'serialize_polynomial',
    'load_polynomial',
    'save_polynomial',
    'PolynomialParseError',
    'DimensionMismatchError',
    'UnboundedRelaxation',
    'CircuitDomainError',
]
