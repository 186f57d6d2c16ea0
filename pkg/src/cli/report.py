# src/cli/report.py
"""
运行记录、CSV读写与汇总表
"""
import json
import logging
import math
from dataclasses import asdict, dataclass, fields
from typing import Any, Dict, List, Tuple

import numpy as np
import pandas as pd

from ..app_config import BENCH_CONFIG

# 配置日志
logger = logging.getLogger(__name__)

SCHEMA_VERSION = BENCH_CONFIG.get('schema_version', 1)
GAP_BUCKETS = tuple(BENCH_CONFIG.get('gap_buckets', [1e-6, 1e-4, 1e-2, 1.0]))


def compute_gap(lower_bound: float, best_value: float) -> float:
    """最优性间隙；下界为 -inf 或最优值未知时为 +inf"""
    if not math.isfinite(lower_bound) or not math.isfinite(best_value):
        return math.inf
    return best_value - lower_bound


@dataclass
class RunReport:
    """单个实例上单个方法的运行记录"""
    instance: str
    n: int
    d: int
    t: int
    seed: int
    method: str
    lower_bound: float
    best_value: float
    gap: float
    wall_time: float
    nodes_expanded: int
    status: str
    schema_version: int = SCHEMA_VERSION

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def to_json_line(record: Dict[str, Any]) -> str:
    """单行JSON，补上 schema_version"""
    payload = {'schema_version': SCHEMA_VERSION}
    payload.update(record)
    return json.dumps(payload, ensure_ascii=False, default=_json_default)


def _json_default(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    return str(value)


def reports_to_frame(reports: List[RunReport]) -> pd.DataFrame:
    columns = [f.name for f in fields(RunReport)]
    return pd.DataFrame([r.to_dict() for r in reports], columns=columns)


def write_reports(reports: List[RunReport], path: str) -> pd.DataFrame:
    frame = reports_to_frame(reports)
    frame.to_csv(path, index=False)
    logger.info(f"已写入 {len(frame)} 条运行记录: {path}")
    return frame


def read_reports(path: str) -> List[RunReport]:
    """读取 write_reports 写出的CSV"""
    frame = pd.read_csv(path, dtype={'instance': str, 'method': str, 'status': str})
    reports = []
    for row in frame.to_dict(orient='records'):
        reports.append(RunReport(
            instance=row['instance'],
            n=int(row['n']),
            d=int(row['d']),
            t=int(row['t']),
            seed=int(row['seed']),
            method=row['method'],
            lower_bound=float(row['lower_bound']),
            best_value=float(row['best_value']),
            gap=float(row['gap']),
            wall_time=float(row['wall_time']),
            nodes_expanded=int(row['nodes_expanded']),
            status=row['status'],
            schema_version=int(row['schema_version']),
        ))
    return reports


def gap_bucket(gap: float) -> str:
    if math.isinf(gap) or math.isnan(gap):
        return 'inf'
    for edge in GAP_BUCKETS:
        if gap <= edge:
            return f"<={edge:g}"
    return f">{GAP_BUCKETS[-1]:g}"


def summarize(frame: pd.DataFrame) -> Tuple[pd.DataFrame, pd.DataFrame]:
    """
    汇总表

    Returns:
        (按 (n, t, method) 分组、对次数取平均的平均耗时表, 按方法统计的间隙直方图)
    """
    timing = (frame.groupby(['n', 't', 'method'])['wall_time']
              .mean()
              .unstack('method')
              .reset_index())

    labels = [f"<={edge:g}" for edge in GAP_BUCKETS] + [f">{GAP_BUCKETS[-1]:g}", 'inf']
    buckets = frame['gap'].astype(float).map(gap_bucket)
    counts = {
        method: [int((buckets[frame['method'] == method] == label).sum()) for label in labels]
        for method in sorted(frame['method'].unique())
    }
    histogram = pd.DataFrame.from_dict(counts, orient='index', columns=labels)
    histogram.index.name = 'method'
    return timing, histogram
