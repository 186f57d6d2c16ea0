# src/bnb/tree.py
"""
分支定界的搜索树
"""
import logging
import math
from dataclasses import dataclass, field
from typing import List, Optional

import numpy as np

from ..orthants.signs import SignVector

# 配置日志
logger = logging.getLogger(__name__)


@dataclass(eq=False)
class BnbNode:
    """
    搜索树节点

    Args:
        sign: 节点对应的符号向量
        lower_bound: 当前下界（已按父节点截断并经过向上传播）
        raw_bound: 本节点求解得到的下界，失败时为 -inf
        status: 求界的状态字符串
        best_value: 在该符号锥内找到的最小函数值
        minimizer: best_value 对应的点
        terminal: 未定符号的变量都只以偶次出现，继续分支不会改善下界
    """
    sign: SignVector
    lower_bound: float
    raw_bound: float = -math.inf
    status: str = 'optimal'
    best_value: float = math.inf
    minimizer: Optional[np.ndarray] = None
    active: bool = True
    sage_done: bool = False
    terminal: bool = False
    node_id: int = 0
    parent: Optional['BnbNode'] = None
    children: List['BnbNode'] = field(default_factory=list)

    @property
    def depth(self) -> int:
        return self.sign.depth

    @property
    def is_leaf(self) -> bool:
        return not self.children

    @property
    def is_full(self) -> bool:
        """全符号叶子，或与之等价的终端节点"""
        return self.sign.is_full or self.terminal

    def __repr__(self) -> str:
        return f"BnbNode({self.sign}, lower_bound={self.lower_bound:.6g}, active={self.active})"


class SearchTree:
    """搜索树，按创建顺序保存全部节点并维护全局最优点"""

    def __init__(self, root: BnbNode):
        root.node_id = 0
        self.root = root
        self.nodes: List[BnbNode] = [root]
        self.best_value = math.inf
        self.best_point: Optional[np.ndarray] = None
        self.record_point(root.minimizer, root.best_value)

    def add_child(self, parent: BnbNode, child: BnbNode) -> BnbNode:
        child.node_id = len(self.nodes)
        child.parent = parent
        parent.children.append(child)
        self.nodes.append(child)
        self.record_point(child.minimizer, child.best_value)
        return child

    def record_point(self, x: Optional[np.ndarray], value: float):
        if x is None or not math.isfinite(value):
            return
        if value < self.best_value:
            self.best_value = value
            self.best_point = x

    def leaves(self) -> List[BnbNode]:
        return [node for node in self.nodes if node.is_leaf]

    def active_nodes(self) -> List[BnbNode]:
        return [node for node in self.nodes if node.active]

    def full_leaves(self) -> List[BnbNode]:
        return [node for node in self.nodes if node.is_leaf and node.is_full]

    def lower_bound(self) -> float:
        """当前下界：所有叶子下界的最小值"""
        return min(node.lower_bound for node in self.leaves())

    def propagate(self, node: BnbNode):
        """自底向上更新：节点下界取自身与子节点最小下界中的较大者"""
        current = node.parent
        while current is not None:
            updated = max(current.lower_bound, min(child.lower_bound for child in current.children))
            if updated == current.lower_bound:
                break
            current.lower_bound = updated
            current = current.parent

    def __len__(self) -> int:
        return len(self.nodes)
