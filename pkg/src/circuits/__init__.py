"""
电路模块，负责电路覆盖、电路数、非负性判定和电路极小点
"""
from .circuit import Circuit, circuit_minimizer, circuit_number, circuit_polynomial, is_nonnegative_circuit
from .covering import Covering, caratheodory_reduce, compute_covering, inner_terms, outer_candidates

__all__ = [
    'Circuit',
    'Covering',
    'compute_covering',
    'caratheodory_reduce',
    'outer_candidates',
    'inner_terms',
    'circuit_number',
    'is_nonnegative_circuit',
    'circuit_polynomial',
    'circuit_minimizer',
]
