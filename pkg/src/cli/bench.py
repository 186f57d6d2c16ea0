# src/cli/bench.py
"""
基准测试：在一组实例上运行各个方法，输出运行记录
"""
import logging
import math
import os
import time
from dataclasses import dataclass
from typing import Iterable, List, Sequence

from joblib import Parallel, delayed
from tqdm import tqdm

from ..app_config import BENCH_CONFIG, BNB_CONFIG
from ..bnb.search import branch_and_bound
from ..bounds.sage import sage_bound
from ..bounds.sonc import sonc_bound
from ..minima.sonc_min import sonc_min
from ..orthants.fork import fork_bound
from ..polycore.parser import load_polynomial
from ..polycore.polynomial import Polynomial
from .generator import GeneratorSpec, generate_polynomial
from .report import RunReport, compute_gap

# 配置日志
logger = logging.getLogger(__name__)

BENCH_METHODS = ('sonc', 'sage', 'fork', 'bnb')
POLYNOMIAL_SUFFIXES = ('.txt', '.json', '.poly')


@dataclass
class BenchInstance:
    """一个基准实例，来自文件时 seed 记为 -1"""
    instance: str
    polynomial: Polynomial
    d: int
    seed: int = -1


def instances_from_grid(ns: Sequence[int], ts: Sequence[int], degrees: Sequence[int],
                        seeds: Sequence[int], nonsquare_fraction: float = None) -> List[BenchInstance]:
    """按 n × t × d × seed 的网格生成实例，跳过 t < n+1 的组合"""
    instances = []
    for n in ns:
        for t in ts:
            if t < n + 1:
                logger.warning(f"跳过 n={n} t={t}：项数少于 n+1")
                continue
            for d in degrees:
                for seed in seeds:
                    spec = GeneratorSpec(n=n, d=d, t=t, seed=seed, nonsquare_fraction=nonsquare_fraction)
                    instances.append(BenchInstance(f"n{n}_d{d}_t{t}_s{seed}", generate_polynomial(spec), d, seed))
    return instances


def instances_from_directory(directory: str) -> List[BenchInstance]:
    """读取目录下的全部多项式文件（按文件名排序）"""
    instances = []
    for name in sorted(os.listdir(directory)):
        if not name.endswith(POLYNOMIAL_SUFFIXES):
            continue
        p = load_polynomial(os.path.join(directory, name))
        instances.append(BenchInstance(os.path.splitext(name)[0], p, p.degree))
    return instances


def run_method(instance: BenchInstance, method: str, timeout: float = None, eps: float = None) -> RunReport:
    """
    在一个实例上运行一个方法；异常记为 status=error，超时记为 status=timeout

    Args:
        instance: 实例
        method: sonc / sage / fork / bnb
        timeout: 墙钟时间上限（秒）；分支定界据此提前停止，其余方法在结束后判定
        eps: 分支定界的精度
    """
    timeout = timeout if timeout is not None else BENCH_CONFIG.get('timeout', 60.0)
    p = instance.polynomial
    started = time.perf_counter()
    nodes = 0
    try:
        if method == 'bnb':
            result = branch_and_bound(p, eps=eps, time_limit=timeout)
            lower_bound, best_value, nodes = result.lower_bound, result.best_value, result.nodes_expanded
            status = 'timeout' if result.stop_reason == 'time_limit' else result.to_bound_result().solver_status
        else:
            if method == 'sonc':
                bound = sonc_bound(p)
            elif method == 'sage':
                bound = sage_bound(p)
            elif method == 'fork':
                bound = fork_bound(p)
            else:
                raise ValueError(f"未知的基准方法: {method}")
            lower_bound, status = bound.lower_bound, bound.solver_status
            best_value = sonc_min(p).value
    except Exception as e:
        logger.error(f"实例 {instance.instance} 上运行 {method} 时出错: {e}")
        lower_bound, best_value, status = -math.inf, math.inf, 'error'

    elapsed = time.perf_counter() - started
    if elapsed > timeout and status != 'error':
        status = 'timeout'
    return RunReport(
        instance=instance.instance,
        n=p.n,
        d=instance.d,
        t=p.t,
        seed=instance.seed,
        method=method,
        lower_bound=float(lower_bound),
        best_value=float(best_value),
        gap=compute_gap(lower_bound, best_value),
        wall_time=elapsed,
        nodes_expanded=int(nodes),
        status=status,
    )


def run_bench(instances: Iterable[BenchInstance], methods: Sequence[str], timeout: float = None,
              workers: int = None, eps: float = None, progress: bool = True) -> List[RunReport]:
    """
    运行基准测试

    Args:
        instances: 实例
        methods: 方法列表
        timeout: 每个实例每个方法的时间上限
        workers: 并行进程数
        eps: 分支定界精度
        progress: 是否显示进度条

    Returns:
        运行记录，顺序为实例 × 方法
    """
    workers = workers if workers is not None else BENCH_CONFIG.get('workers', 1)
    eps = eps if eps is not None else BNB_CONFIG.get('eps', 2.0 ** -23)
    unknown = [m for m in methods if m not in BENCH_METHODS]
    if unknown:
        raise ValueError(f"未知的基准方法: {unknown}，可选 {BENCH_METHODS}")

    tasks = [(instance, method) for instance in instances for method in methods]
    iterator = tqdm(tasks, desc='bench', disable=not progress)
    if workers > 1:
        reports = Parallel(n_jobs=workers)(
            delayed(run_method)(instance, method, timeout, eps) for instance, method in iterator
        )
    else:
        reports = [run_method(instance, method, timeout, eps) for instance, method in iterator]
    logger.info(f"基准测试完成: {len(reports)} 条记录")
    return list(reports)
