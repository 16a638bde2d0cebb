"""Random-expression trees, a small text syntax for them, and the Monte Carlo engine.

Every distribution leaf is an independent draw per realization. Reusing one
draw is written with ``let``::

    U(5,33) * U(5,33)          # two independent factors
    let v = U(5,33); v * v     # one factor, squared

Run ``i`` of :func:`simulate` is always driven by stream ``(seed, i)``, so a
report does not depend on chunking or on how many workers evaluated it.
"""
from __future__ import annotations

import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional, Sequence, Union

import numpy as np

from . import sampling as smp
from .sampling import Bound, RngStream, stream_keys, stream_uniforms

__all__ = [
    "Expr",
    "Dist",
    "Const",
    "Var",
    "Let",
    "Neg",
    "Add",
    "Sub",
    "Mul",
    "Div",
    "Pow",
    "ParseError",
    "UnboundVariable",
    "DomainError",
    "SimulationAborted",
    "EmptyResult",
    "parse_expr",
    "as_expr",
    "check_bound",
    "count_draws",
    "realize",
    "realize_runs",
    "simulate",
    "theoretical_pom",
    "MAX_RETRIES",
]

MAX_RETRIES = 100


class ParseError(ValueError):
    def __init__(self, message: str, position: int = -1):
        self.position = position
        where = f" at position {position}" if position >= 0 else ""
        super().__init__(f"{message}{where}")


class UnboundVariable(ParseError):
    pass


class DomainError(ArithmeticError):
    """A realization hit division by zero or a non-integer power of a negative."""


class SimulationAborted(RuntimeError):
    pass


class EmptyResult(ValueError):
    pass


# ---------------------------------------------------------------------------
# tree

_PREC_LET, _PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = range(6)


class Expr:
    """Base class for expression nodes; supports building with Python operators."""

    precedence = _PREC_ATOM

    def __add__(self, other):
        return Add(self, as_expr(other))

    def __radd__(self, other):
        return Add(as_expr(other), self)

    def __sub__(self, other):
        return Sub(self, as_expr(other))

    def __rsub__(self, other):
        return Sub(as_expr(other), self)

    def __mul__(self, other):
        return Mul(self, as_expr(other))

    def __rmul__(self, other):
        return Mul(as_expr(other), self)

    def __truediv__(self, other):
        return Div(self, as_expr(other))

    def __rtruediv__(self, other):
        return Div(as_expr(other), self)

    def __pow__(self, other):
        return Pow(self, as_expr(other))

    def __rpow__(self, other):
        return Pow(as_expr(other), self)

    def __neg__(self):
        return Neg(self)

    def __str__(self):
        return _render(self)


@dataclass(frozen=True, eq=True)
class Dist(Expr):
    spec: smp.DistributionSpec


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: float

    def __post_init__(self):
        object.__setattr__(self, "value", float(self.value))


@dataclass(frozen=True, eq=True)
class Var(Expr):
    name: str


@dataclass(frozen=True, eq=True)
class Let(Expr):
    name: str
    bound: Expr
    body: Expr

    precedence = _PREC_LET


@dataclass(frozen=True, eq=True)
class Neg(Expr):
    operand: Expr

    precedence = _PREC_NEG


@dataclass(frozen=True, eq=True)
class _BinOp(Expr):
    lhs: Expr
    rhs: Expr

    symbol = "?"


class Add(_BinOp):
    symbol, precedence = "+", _PREC_ADD


class Sub(_BinOp):
    symbol, precedence = "-", _PREC_ADD


class Mul(_BinOp):
    symbol, precedence = "*", _PREC_MUL


class Div(_BinOp):
    symbol, precedence = "/", _PREC_MUL


class Pow(_BinOp):
    symbol, precedence = "^", _PREC_POW


def as_expr(obj) -> Expr:
    if isinstance(obj, Expr):
        return obj
    if isinstance(obj, smp._SPEC_TYPES):
        return Dist(obj)
    if isinstance(obj, (int, float, np.integer, np.floating)):
        return Const(float(obj))
    if isinstance(obj, str):
        return parse_expr(obj)
    raise TypeError(f"cannot use {obj!r} as an expression")


def _children(node: Expr):
    if isinstance(node, _BinOp):
        return (node.lhs, node.rhs)
    if isinstance(node, Let):
        return (node.bound, node.body)
    if isinstance(node, Neg):
        return (node.operand,)
    return ()


def _walk(node: Expr):
    yield node
    for child in _children(node):
        yield from _walk(child)


def count_draws(expr: Expr) -> int:
    """Number of uniforms one realization consumes."""
    return sum(isinstance(n, Dist) for n in _walk(expr))


def check_bound(expr: Expr, scope: Sequence[str] = ()) -> None:
    """Raise UnboundVariable if any Var lacks an enclosing Let."""
    if isinstance(expr, Var):
        if expr.name not in scope:
            raise UnboundVariable(f"unbound variable {expr.name!r}")
    elif isinstance(expr, Let):
        check_bound(expr.bound, scope)
        check_bound(expr.body, (*scope, expr.name))
    else:
        for child in _children(expr):
            check_bound(child, scope)


def _render(node: Expr) -> str:
    if isinstance(node, Dist):
        return str(node.spec)
    if isinstance(node, Const):
        text = smp._num(node.value)
        return f"({text})" if node.value < 0 else text
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Let):
        return f"let {node.name} = {_render(node.bound)}; {_render(node.body)}"
    if isinstance(node, Neg):
        return "-" + _wrap(node.operand, node.operand.precedence < _PREC_NEG)
    assert isinstance(node, _BinOp)
    p = node.precedence
    if isinstance(node, Pow):
        left_paren = node.lhs.precedence <= p
        right_paren = node.rhs.precedence < p
    else:
        left_paren = node.lhs.precedence < p
        right_paren = node.rhs.precedence <= p
    return f"{_wrap(node.lhs, left_paren)}{node.symbol}{_wrap(node.rhs, right_paren)}"


def _wrap(node: Expr, paren: bool) -> str:
    text = _render(node)
    return f"({text})" if paren else text


# ---------------------------------------------------------------------------
# parser

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),=;]))"
)

_DISTS: Dict[str, Callable] = {
    "U": smp.UniformCont,
    "UD": smp.UniformDisc,
    "N": smp.Normal,
    "E": smp.Exponential,
    "LN": smp.Lognormal,
    "TRI": smp.Triangular,
    "KX": smp.Reciprocal,
    "DICE": smp.Dice,
}
_ARITY = {"U": 2, "UD": 2, "N": 2, "E": 1, "LN": 2, "TRI": 3, "KX": 2, "DICE": 1, "EMP": 1}


def _tokenize(text: str):
    tokens = []
    pos = 0
    while True:
        m = _TOKEN.match(text, pos)
        if not m:
            rest = text[pos:]
            if rest.strip():
                raise ParseError(f"unexpected character {rest.strip()[0]!r}",
                                 pos + len(rest) - len(rest.lstrip()))
            break
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, datasets):
        self.tokens = _tokenize(text)
        self.i = 0
        self.datasets = datasets
        self.scope: List[str] = []

    def peek(self, offset=0):
        return self.tokens[min(self.i + offset, len(self.tokens) - 1)]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value or kind == "end":
            raise ParseError(f"expected {value!r}, found {text or 'end of input'!r}", pos)

    def parse(self) -> Expr:
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return node

    def expr(self) -> Expr:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self) -> Expr:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            rhs = self.unary()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def unary(self) -> Expr:
        if self.peek()[:2] == ("op", "-"):
            self.take()
            operand = self.unary()
            if isinstance(operand, Const):
                return Const(-operand.value)
            return Neg(operand)
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return Pow(base, self.power())
        return base

    def atom(self) -> Expr:
        kind, text, pos = self.take()
        if kind == "num":
            return Const(float(text))
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "ident":
            if text == "let":
                return self.let(pos)
            if self.peek()[:2] == ("op", "(") and text in _ARITY:
                return self.dist(text, pos)
            if text not in self.scope:
                raise UnboundVariable(f"unbound variable {text!r}", pos)
            return Var(text)
        raise ParseError(f"unexpected {text or 'end of input'!r}", pos)

    def let(self, pos) -> Expr:
        kind, name, npos = self.take()
        if kind != "ident" or name == "let" or name in _ARITY:
            raise ParseError("expected a variable name after 'let'", npos)
        self.expect("=")
        bound = self.expr()
        self.expect(";")
        self.scope.append(name)
        try:
            body = self.expr()
        finally:
            self.scope.pop()
        return Let(name, bound, body)

    def dist(self, name, pos) -> Expr:
        self.expect("(")
        args = [self.number()]
        while self.peek()[:2] == ("op", ","):
            self.take()
            args.append(self.number())
        self.expect(")")
        if len(args) != _ARITY[name]:
            raise ParseError(f"{name} takes {_ARITY[name]} argument(s), got {len(args)}", pos)
        try:
            if name == "EMP":
                return Dist(self.empirical(args[0], pos))
            if name in ("UD", "DICE"):
                if any(a != int(a) for a in args):
                    raise ParseError(f"{name} needs integer arguments", pos)
                args = [int(a) for a in args]
            return Dist(_DISTS[name](*args))
        except smp.InvalidSpec as exc:
            raise ParseError(str(exc), pos) from None

    def empirical(self, index, pos):
        if self.datasets is None or index != int(index) or not 0 <= index < len(self.datasets):
            raise ParseError(f"EMP({smp._num(index)}) refers to no loaded data set", pos)
        data = self.datasets[int(index)]
        return data if isinstance(data, smp.Empirical) else smp.Empirical(tuple(data))

    def number(self) -> float:
        sign = 1.0
        if self.peek()[:2] == ("op", "-"):
            self.take()
            sign = -1.0
        kind, text, pos = self.take()
        if kind != "num":
            raise ParseError("distribution arguments must be numbers", pos)
        return sign * float(text)


def parse_expr(text: str, datasets: Optional[Sequence] = None) -> Expr:
    """Parse the expression syntax into a tree.

    ``datasets`` supplies the values behind ``EMP(0)``, ``EMP(1)``, ...
    """
    return _Parser(text, datasets).parse()


# ---------------------------------------------------------------------------
# evaluation


def _evaluate(expr: Expr, keys: np.ndarray, first_slot: int):
    n = keys.shape[0]
    invalid = np.zeros(n, dtype=bool)
    slot = [first_slot]

    def ev(node, env):
        nonlocal invalid
        if isinstance(node, Dist):
            u = stream_uniforms(keys, slot[0])
            slot[0] += 1
            return smp.ppf(node.spec, u)
        if isinstance(node, Const):
            return np.full(n, node.value)
        if isinstance(node, Var):
            return env[node.name]
        if isinstance(node, Let):
            return ev(node.body, {**env, node.name: ev(node.bound, env)})
        if isinstance(node, Neg):
            return -ev(node.operand, env)
        a = ev(node.lhs, env)
        b = ev(node.rhs, env)
        if isinstance(node, Add):
            return a + b
        if isinstance(node, Sub):
            return a - b
        if isinstance(node, Mul):
            return a * b
        if isinstance(node, Div):
            invalid |= b == 0
            return a / b
        if isinstance(node, Pow):
            invalid |= ((a < 0) & (b != np.floor(b))) | ((a == 0) & (b < 0))
            return np.power(a, b)
        raise TypeError(f"unknown node {node!r}")

    with np.errstate(all="ignore"):
        values = ev(expr, {})
    return values, invalid


def _realize_keys(expr: Expr, keys: np.ndarray, first_slot: int = 0,
                  max_retries: int = MAX_RETRIES, indices=None):
    draws = count_draws(expr)
    values, bad = _evaluate(expr, keys, first_slot)
    attempts = np.ones(keys.shape[0], dtype=np.int64)
    retry = 1
    while bad.any() and draws and retry <= max_retries:
        redo = np.flatnonzero(bad)
        v, b = _evaluate(expr, keys[redo], first_slot + retry * draws)
        values[redo] = v
        bad[redo] = b
        attempts[redo] += 1
        retry += 1
    if bad.any():
        first = int(np.flatnonzero(bad)[0])
        run = int(indices[first]) if indices is not None else first
        raise SimulationAborted(
            f"run {run} of {_render(expr)!r} still hit a domain error after "
            f"{max_retries} re-draws ({int(bad.sum())} run(s) affected)"
        )
    return values, attempts


def realize(expr: Expr, rng: RngStream, max_retries: int = MAX_RETRIES) -> float:
    """One realization of ``expr`` drawn from ``rng``.

    Degenerate draws (division by zero, non-integer power of a negative) are
    discarded and re-drawn up to ``max_retries`` times.
    """
    check_bound(expr)
    values, attempts = _realize_keys(expr, rng.key, rng.position, max_retries)
    rng.position += count_draws(expr) * int(attempts[0])
    return float(values[0])


def realize_runs(expr: Expr, runs: int, seed: int, *, n_jobs: int = 1,
                 chunk_size: int = 1 << 15, max_retries: int = MAX_RETRIES) -> np.ndarray:
    """Realize runs ``0..runs-1`` of ``expr``; run ``i`` uses stream ``(seed, i)``."""
    if runs < 1:
        raise ValueError("runs must be >= 1")
    check_bound(expr)
    starts = range(0, runs, chunk_size)

    def chunk(start):
        idx = np.arange(start, min(start + chunk_size, runs))
        return _realize_keys(expr, stream_keys(seed, idx), 0, max_retries, idx)[0]

    if n_jobs == 1 or len(starts) == 1:
        parts = [chunk(s) for s in starts]
    else:
        with ThreadPoolExecutor(max_workers=n_jobs) as pool:
            parts = list(pool.map(chunk, starts))
    return np.concatenate(parts)


def simulate(expr, runs: int, seed: int = 1, *, name: Optional[str] = None,
             n_jobs: int = 1, chunk_size: int = 1 << 15):
    """Run ``expr`` ``runs`` times and summarize the results as a BenfordReport."""
    from .report import build_report

    expr = as_expr(expr)
    t0 = time.perf_counter()
    values = realize_runs(expr, runs, seed, n_jobs=n_jobs, chunk_size=chunk_size)
    elapsed = int(round((time.perf_counter() - t0) * 1000))
    text = _render(expr)
    return build_report(values, name=name or text, expression=text, runs=runs, seed=seed,
                        pom_theoretical=theoretical_pom(expr), elapsed_ms=elapsed)


# ---------------------------------------------------------------------------
# support propagation


def theoretical_pom(expr: Expr) -> Union[float, Bound]:
    """max/min of the expression's support by interval propagation.

    Returns ``Bound.UNBOUNDED`` if a leaf has infinite support or the support
    touches zero, and ``Bound.UNAVAILABLE`` when it straddles zero. Shared
    ``let`` bindings are treated as independent, which can overestimate.
    """
    expr = as_expr(expr)
    for node in _walk(expr):
        if isinstance(node, Dist) and smp.theoretical_support(node.spec) is Bound.UNBOUNDED:
            return Bound.UNBOUNDED
    iv = _interval(expr, {})
    if iv is None:
        return Bound.UNAVAILABLE
    lo, hi = iv
    if hi < 0:
        lo, hi = -hi, -lo
    if lo < 0 or hi == 0:
        return Bound.UNAVAILABLE
    if lo == 0 or math.isinf(hi):
        return Bound.UNBOUNDED
    return hi / lo


def _interval(node: Expr, env):
    if isinstance(node, Dist):
        return smp.theoretical_support(node.spec)
    if isinstance(node, Const):
        return (node.value, node.value)
    if isinstance(node, Var):
        return env[node.name]
    if isinstance(node, Let):
        bound = _interval(node.bound, env)
        if bound is None:
            return None
        return _interval(node.body, {**env, node.name: bound})
    if isinstance(node, Neg):
        iv = _interval(node.operand, env)
        return None if iv is None else (-iv[1], -iv[0])
    a = _interval(node.lhs, env)
    b = _interval(node.rhs, env)
    if a is None or b is None:
        return None
    if isinstance(node, Add):
        return (a[0] + b[0], a[1] + b[1])
    if isinstance(node, Sub):
        return (a[0] - b[1], a[1] - b[0])
    if isinstance(node, Mul):
        return _imul(a, b)
    if isinstance(node, Div):
        c, d = b
        if c > 0 or d < 0:
            return _imul(a, (1.0 / d, 1.0 / c))
        if c == 0 and d > 0:
            return _imul(a, (1.0 / d, math.inf))
        return None
    if isinstance(node, Pow):
        return _ipow(a, b)
    raise TypeError(f"unknown node {node!r}")


def _imul(a, b):
    if min(a[0], b[0]) >= 0:
        lo = a[0] * b[0]
        hi = 0.0 if 0 in (a[1], b[1]) else a[1] * b[1]
        return (lo, hi)
    if any(math.isinf(x) for x in (*a, *b)):
        return None
    corners = [x * y for x in a for y in b]
    return (min(corners), max(corners))


def _ipow(base, exp):
    a, b = base
    c, d = exp
    if math.isinf(c) or math.isinf(d):
        return None
    if a > 0 or (a == 0 and c > 0):
        with np.errstate(all="ignore"):
            corners = [float(np.power(x, y)) for x in (a, b) for y in (c, d)]
        return (min(corners), max(corners))
    if c == d and c == int(c) and c >= 0 and not math.isinf(b):
        n = int(c)
        ends = (a ** n, b ** n)
        if n % 2 == 0 and a < 0 < b:
            return (0.0, max(ends))
        return (min(ends), max(ends))
    return None
