# src/polycore/parser.py
"""
多项式文本解析与文件读写

文法:
    poly := term (('+'|'-') term)*
    term := coeff? ('*'? var)*
    var  := 'x' index ('^' exponent)?
"""
import json
import logging
import re
from typing import NamedTuple

import pyparsing as pp

from .errors import PolynomialParseError
from .polynomial import Polynomial, polynomial_from_terms

# 配置日志
logger = logging.getLogger(__name__)

_VAR_RE = re.compile(r"x(\d+)(?:\^(.*))?")


class _Factor(NamedTuple):
    index: int
    exponent: int


class _Term(NamedTuple):
    coefficient: float
    powers: dict


def _parse_factor(s, loc, toks):
    match = _VAR_RE.fullmatch(toks[0])
    index = int(match.group(1))
    raw = match.group(2)
    if raw is None:
        return [_Factor(index, 1)]
    try:
        value = float(raw)
    except ValueError:
        raise pp.ParseFatalException(s, loc, f"变量 x{index} 的指数无法识别: '{raw}'")
    if value < 0:
        raise pp.ParseFatalException(s, loc, f"变量 x{index} 的指数为负数: {raw}")
    if not value.is_integer():
        raise pp.ParseFatalException(s, loc, f"变量 x{index} 的指数不是整数: {raw}")
    return [_Factor(index, int(value))]


def _parse_term(s, loc, toks):
    coefficient = 1.0
    powers = {}
    for tok in toks:
        if isinstance(tok, _Factor):
            powers[tok.index] = powers.get(tok.index, 0) + tok.exponent
        else:
            coefficient *= float(tok)
    return [_Term(coefficient, powers)]


def _build_grammar() -> pp.ParserElement:
    coeff = pp.Regex(r"(\d+\.?\d*|\.\d+)([eE][-+]?\d+)?")
    var = pp.Regex(r"x\d+(\^[-+]?[\d.]*)?").set_parse_action(_parse_factor)
    star = pp.Suppress(pp.Literal('*'))
    factors = var + pp.ZeroOrMore(pp.Optional(star) + var)
    term = ((coeff + pp.Optional(pp.Optional(star) + factors)) | factors).set_parse_action(_parse_term)
    sign = pp.one_of('+ -')
    return pp.Optional(sign) + term + pp.ZeroOrMore(sign + term) + pp.StringEnd()


_GRAMMAR = _build_grammar()


def parse_polynomial(text: str, n: int = None) -> Polynomial:
    """
    解析多项式文本

    Args:
        text: 例如 "x0^4 + x0^3 - x0 + 1"
        n: 变量个数，缺省为出现过的最大下标加一

    Returns:
        规范化的多项式（合并同类项，去掉零系数项）
    """
    if text is None or not text.strip():
        raise PolynomialParseError("多项式文本为空", position=0)

    try:
        tokens = _GRAMMAR.parse_string(text, parse_all=True)
    except pp.ParseBaseException as e:
        raise PolynomialParseError(f"多项式语法错误: {e.msg}", position=e.loc) from e

    terms = []
    sign = 1.0
    for tok in tokens:
        if isinstance(tok, _Term):
            terms.append((sign * tok.coefficient, tok.powers))
            sign = 1.0
        else:
            sign = -1.0 if tok == '-' else 1.0

    poly = polynomial_from_terms(terms, n)
    logger.debug(f"解析多项式: n={poly.n}, t={poly.t}")
    return poly


def serialize_polynomial(p: Polynomial) -> str:
    return str(p)


def load_polynomial(path: str) -> Polynomial:
    """
    从文件读取多项式，内容以 '{' 开头时按JSON格式解析，否则按文本文法解析

    Args:
        path: 文件路径

    Returns:
        多项式
    """
    try:
        with open(path, 'r', encoding='utf-8') as f:
            content = f.read()
    except FileNotFoundError:
        raise FileNotFoundError(f"多项式文件 {path} 不存在")

    if content.lstrip().startswith('{'):
        try:
            return Polynomial.from_json(json.loads(content))
        except json.JSONDecodeError as e:
            raise PolynomialParseError(f"多项式文件 {path} 的JSON格式错误: {e.msg}", position=e.pos) from e
    return parse_polynomial(content)


def save_polynomial(p: Polynomial, path: str, as_json: bool = False):
    with open(path, 'w', encoding='utf-8') as f:
        if as_json:
            json.dump(p.to_json(), f, ensure_ascii=False)
        else:
            f.write(serialize_polynomial(p))
        f.write('\n')
