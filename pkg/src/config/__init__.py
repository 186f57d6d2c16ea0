"""
配置模块，负责加载求解器、分支定界和实验脚本的默认参数
"""
from .loader import ConfigLoader

# 导出配置加载器类
__all__ = ['ConfigLoader']
