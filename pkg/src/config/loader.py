import json
import os
from typing import Any, Dict


class ConfigLoader:
    """配置加载器，从config目录读取JSON默认参数"""

    DEFAULTS_FILE = 'defaults.json'

    @staticmethod
    def load_json_config(filename: str) -> Dict[str, Any]:
        """
        加载JSON配置文件

        Args:
            filename: 配置文件名，相对于config目录

        Returns:
            加载的JSON对象
        """
        config_dir = os.path.dirname(os.path.abspath(__file__))
        file_path = os.path.join(config_dir, filename)

        try:
            with open(file_path, 'r', encoding='utf-8') as f:
                return json.load(f)
        except FileNotFoundError:
            raise FileNotFoundError(f"配置文件 {filename} 不存在，请检查路径: {file_path}")
        except json.JSONDecodeError:
            raise ValueError(f"配置文件 {filename} 格式错误，请检查JSON语法")

    @classmethod
    def load_section(cls, section: str, filename: str = None) -> Dict[str, Any]:
        """
        读取默认配置中的某一节

        Args:
            section: 节名，例如 'solver'、'bnb'
            filename: 可选的配置文件名，默认为defaults.json

        Returns:
            该节的参数字典（副本），不存在时返回空字典
        """
        config = cls.load_json_config(filename or cls.DEFAULTS_FILE)
        return dict(config.get(section, {}))
