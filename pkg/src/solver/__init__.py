"""
求解器模块，提供单纯形法线性规划和对数障碍法凸规划
"""
from .convex import BarrierSolver, solve_convex
from .lp import solve_lp
from .program import (AffineInequality, ConstraintAtom, ConvexProgram, LinearProgram, LogSumExpInequality,
                      RelativeEntropyInequality, SolverSolution, SolverStatus)

__all__ = [
    'LinearProgram',
    'ConvexProgram',
    'ConstraintAtom',
    'AffineInequality',
    'LogSumExpInequality',
    'RelativeEntropyInequality',
    'SolverSolution',
    'SolverStatus',
    'solve_lp',
    'solve_convex',
    'BarrierSolver',
]
