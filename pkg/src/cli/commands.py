# src/cli/commands.py
"""
命令行入口：bound / min / orthants / gen / bench

单次运行在标准输出打印一行JSON（或可读文本），日志写到标准错误。
退出码：0 成功（包括下界为 -inf），2 输入错误，3 内部错误。
"""
import argparse
import logging
import sys
from typing import Any, Dict, List, Optional

from ..app_config import BENCH_CONFIG, BNB_CONFIG
from ..bnb.search import branch_and_bound
from ..bounds.sage import sage_bound
from ..bounds.sonc import sonc_bound
from ..minima.sonc_min import sonc_min, sonc_min_signed
from ..orthants.fork import fork_bound
from ..orthants.minimal import minimal_orthants
from ..orthants.signs import SignVector
from ..polycore.errors import DimensionMismatchError, PolynomialParseError
from ..polycore.parser import load_polynomial, save_polynomial, serialize_polynomial
from .bench import BENCH_METHODS, instances_from_directory, instances_from_grid, run_bench
from .generator import GeneratorSpec, generate_polynomial
from .report import compute_gap, reports_to_frame, summarize, to_json_line, write_reports

# 配置日志
logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INPUT_ERROR = 2
EXIT_INTERNAL_ERROR = 3

INPUT_ERRORS = (PolynomialParseError, DimensionMismatchError, OSError, ValueError, KeyError)

STRATEGY_NAMES = {'worst': 'worst_first', 'dfs': 'dfs'}
SIGN_SYMBOLS = {'+': 1, '-': -1, '0': 0, '1': 1, '-1': -1}


def parse_signs(text: str, n: int) -> SignVector:
    """'+,-,0' 或 '+-0' 形式的符号向量"""
    tokens = [token.strip() for token in text.split(',')] if ',' in text else list(text.strip())
    try:
        entries = tuple(SIGN_SYMBOLS[token] for token in tokens)
    except KeyError as e:
        raise ValueError(f"无法识别的符号: {e.args[0]}") from e
    if len(entries) != n:
        raise DimensionMismatchError(f"符号向量长度 {len(entries)} 与变量个数 {n} 不一致")
    return SignVector(entries)


def _emit(record: Dict[str, Any], as_json: bool):
    if as_json:
        print(to_json_line(record))
        return
    for key, value in record.items():
        print(f"{key}: {value}")


def cmd_bound(args) -> int:
    p = load_polynomial(args.file)
    method = args.method
    record: Dict[str, Any] = {'file': args.file, 'method': method}

    if method == 'bnb':
        result = branch_and_bound(
            p,
            strategy=STRATEGY_NAMES[args.strategy],
            sparse=args.sparse,
            eps=args.eps,
            use_sage=not args.no_sage,
            sage_deferral_mode=args.sage_deferral,
            exhaustive=args.exhaustive,
            workers=args.workers,
            time_limit=args.timeout,
            covering_strategy=args.covering,
        )
        record.update({
            'lower_bound': result.lower_bound,
            'best_value': result.best_value,
            'gap': result.gap,
            'minimizer': result.minimizer,
            'nodes_expanded': result.nodes_expanded,
            'stop_reason': result.stop_reason,
            'wall_time': result.wall_time,
        })
        _emit(record, args.json)
        return EXIT_OK

    if method == 'sonc':
        bound = sonc_bound(p, strategy=args.covering)
    elif method == 'sage':
        bound = sage_bound(p)
    else:
        bound = fork_bound(p, method=args.fork_method, strategy=args.covering, workers=args.workers)

    best_value = sonc_min(p, strategy=args.covering).value
    record.update({
        'lower_bound': bound.lower_bound,
        'status': bound.solver_status,
        'best_value': best_value,
        'gap': compute_gap(bound.lower_bound, best_value),
        'wall_time': bound.wall_time,
    })
    if method == 'fork' and args.list_orthants:
        record['orthants'] = [str(s) for s in bound.details['orthants']]
        record['orthant_bounds'] = bound.details['orthant_bounds']
    _emit(record, args.json)
    return EXIT_OK


def cmd_min(args) -> int:
    p = load_polynomial(args.file)
    if args.signs:
        result = sonc_min_signed(p, parse_signs(args.signs, p.n), strategy=args.covering, seed=args.seed)
    else:
        result = sonc_min(p, strategy=args.covering, seed=args.seed)
    _emit({
        'file': args.file,
        'candidate': result.candidate,
        'value': result.value,
        'relaxed_candidate': result.relaxed_candidate,
        'iterations': result.iterations,
        'converged': result.converged,
        'fallback': result.fallback,
    }, args.json)
    return EXIT_OK


def cmd_orthants(args) -> int:
    p = load_polynomial(args.file)
    entries = minimal_orthants(p)
    _emit({
        'file': args.file,
        'orthants': [str(orthant) for _, orthant in entries],
        'effective_signs': [list(signs.restricted) for signs, _ in entries],
        'columns': list(entries[0][0].columns) if entries else [],
    }, args.json)
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = GeneratorSpec(n=args.n, d=args.d, t=args.t, seed=args.seed, nonsquare_fraction=args.nonsquare_fraction)
    p = generate_polynomial(spec)
    if args.out:
        save_polynomial(p, args.out, as_json=args.json)
        logger.info(f"已生成多项式: {args.out}")
    else:
        print(to_json_line(p.to_json()) if args.json else serialize_polynomial(p))
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.dir:
        instances = instances_from_directory(args.dir)
    else:
        seeds = list(range(args.seed, args.seed + args.seeds))
        instances = instances_from_grid(args.n, args.t, args.d, seeds, args.nonsquare_fraction)
    reports = run_bench(instances, args.methods, timeout=args.timeout, workers=args.workers, eps=args.eps,
                        progress=not args.quiet)
    frame = write_reports(reports, args.out) if args.out else reports_to_frame(reports)
    if frame.empty:
        logger.warning("没有可运行的实例")
        return EXIT_OK
    timing, histogram = summarize(frame)
    if args.summary:
        timing.to_csv(f"{args.summary}_timing.csv", index=False)
        histogram.to_csv(f"{args.summary}_gaps.csv")
    print(timing.to_string(index=False))
    print()
    print(histogram.to_string())
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='sonc', description="SONC/SAGE 多项式下界与分支定界")
    parser.add_argument('--verbose', '-v', action='store_true', help="输出调试日志")
    subparsers = parser.add_subparsers(dest='command', required=True)

    shared = argparse.ArgumentParser(add_help=False)
    shared.add_argument('--covering', choices=['simple', 'extended'], default=None, help="覆盖策略")
    shared.add_argument('--seed', type=int, default=0)
    shared.add_argument('--json', action='store_true', help="输出单行JSON")

    bound = subparsers.add_parser('bound', parents=[shared], help="计算下界")
    bound.add_argument('file')
    bound.add_argument('--method', choices=['sonc', 'sage', 'fork', 'bnb'], default='sonc')
    bound.add_argument('--strategy', choices=sorted(STRATEGY_NAMES), default='worst')
    bound.add_argument('--sparse', action='store_true', help="只沿最小卦限建树")
    bound.add_argument('--eps', type=float, default=BNB_CONFIG.get('eps', 2.0 ** -23))
    bound.add_argument('--timeout', type=float, default=None)
    bound.add_argument('--workers', type=int, default=None)
    bound.add_argument('--no-sage', action='store_true', help="分支定界中不使用SAGE")
    bound.add_argument('--sage-deferral', action='store_true', help="节点第一次被选中时才计算SAGE")
    bound.add_argument('--exhaustive', action='store_true', help="关闭剪枝准则")
    bound.add_argument('--fork-method', choices=['sonc', 'sage', 'both'], default='sonc')
    bound.add_argument('--list-orthants', action='store_true')
    bound.set_defaults(handler=cmd_bound)

    minimum = subparsers.add_parser('min', parents=[shared], help="SONC-Min 局部极小")
    minimum.add_argument('file')
    minimum.add_argument('--signs', default=None, help="符号向量，例如 +,-,0")
    minimum.set_defaults(handler=cmd_min)

    orthants = subparsers.add_parser('orthants', parents=[shared], help="列出最小卦限")
    orthants.add_argument('file')
    orthants.set_defaults(handler=cmd_orthants)

    gen = subparsers.add_parser('gen', parents=[shared], help="生成随机多项式")
    gen.add_argument('--n', type=int, required=True)
    gen.add_argument('--d', type=int, required=True)
    gen.add_argument('--t', type=int, required=True)
    gen.add_argument('--nonsquare-fraction', type=float, default=None)
    gen.add_argument('--out', default=None)
    gen.set_defaults(handler=cmd_gen)

    bench = subparsers.add_parser('bench', parents=[shared], help="基准测试")
    bench.add_argument('--dir', default=None, help="实例目录；缺省时按网格生成")
    bench.add_argument('--n', type=int, nargs='+', default=[2, 3])
    bench.add_argument('--t', type=int, nargs='+', default=[6, 9])
    bench.add_argument('--d', type=int, nargs='+', default=[4])
    bench.add_argument('--seeds', type=int, default=5, help="每个网格点的种子个数")
    bench.add_argument('--nonsquare-fraction', type=float, default=None)
    bench.add_argument('--methods', nargs='+', choices=BENCH_METHODS, default=['sonc', 'bnb'])
    bench.add_argument('--eps', type=float, default=BNB_CONFIG.get('eps', 2.0 ** -23))
    bench.add_argument('--timeout', type=float, default=BENCH_CONFIG.get('timeout', 60.0))
    bench.add_argument('--workers', type=int, default=BENCH_CONFIG.get('workers', 1))
    bench.add_argument('--out', default=None, help="运行记录CSV")
    bench.add_argument('--summary', default=None, help="汇总表CSV的文件名前缀")
    bench.add_argument('--quiet', action='store_true', help="不显示进度条")
    bench.set_defaults(handler=cmd_bench)
    return parser


def configure_logging(verbose: bool):
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    configure_logging(args.verbose)
    try:
        return args.handler(args)
    except INPUT_ERRORS as e:
        print(f"输入错误: {e}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    except Exception as e:
        logger.error(f"内部错误: {e}", exc_info=True)
        return EXIT_INTERNAL_ERROR
