"""
下界模块，构造并求解SONC几何规划与SAGE相对熵规划
"""
from .result import BoundResult
from .sage import build_sage_program, minimal_face, sage_bound
from .sonc import build_sonc_program, sonc_bound, sonc_certificate_circuits

__all__ = [
    'BoundResult',
    'sonc_bound',
    'sage_bound',
    'build_sonc_program',
    'build_sage_program',
    'minimal_face',
    'sonc_certificate_circuits',
]
