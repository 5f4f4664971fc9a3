"""Scalar field expressions over chart coordinates.

Grammar (whitespace insignificant)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('-' | '+') unary | factor
    factor := base ('^' ['-'] int)?
    base   := number | ident | ident '(' expr ')' | '(' expr ')'

Identifiers are ``x1 .. xN`` (chart coordinates), ``t`` (curve parameter,
only where allowed) and the functions ``sin cos exp log sqrt abs``.

Expressions are immutable trees; evaluation is pure. Derivatives come from
forward-mode dual numbers, one seeded pass per direction.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Sequence, Union

import numpy as np

from .dual import Dual

__all__ = [
    "Expression",
    "ExpressionError",
    "ParseError",
    "DomainError",
    "Const",
    "Var",
    "Param",
    "Neg",
    "Call",
    "BinOp",
    "Pow",
    "parse",
    "to_source",
    "evaluate",
    "eval_with_gradient",
    "eval_with_time_derivative",
    "FUNCTIONS",
]

FUNCTIONS = ("sin", "cos", "exp", "log", "sqrt", "abs")


class ExpressionError(ValueError):
    """Base class for parse and evaluation failures."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        if pos is not None:
            message = f"{message} (at offset {pos})"
        super().__init__(message)


class ParseError(ExpressionError):
    pass


class DomainError(ExpressionError, ArithmeticError):
    pass


# ---------------------------------------------------------------------------
# tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Const:
    value: float
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Var:
    index: int  # 0-based coordinate index
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Param:
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Neg:
    arg: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Call:
    func: str
    arg: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "Node"
    right: "Node"
    pos: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int
    pos: int = field(default=0, compare=False)


Node = Union[Const, Var, Param, Neg, Call, BinOp, Pow]


@dataclass(frozen=True)
class Expression:
    """A parsed scalar field.

    ``dimension`` is the number of chart coordinates the expression may
    reference; ``uses_t`` tells whether the curve parameter is allowed.
    """

    root: Node
    dimension: int
    uses_t: bool = False
    source: str = field(default="", compare=False)
    _fn: object = field(default=None, init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "_fn", _compile(self.root))

    def __str__(self) -> str:
        return to_source(self)

    def __call__(self, point: Sequence[float] = (), t: float | None = None) -> float:
        return evaluate(self, point, t)


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<num>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<ident>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()−])
    """,
    re.VERBOSE,
)


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(source):
        m = _TOKEN.match(source, pos)
        if m is None:
            raise ParseError(
                f"unexpected character {source[pos]!r}", len(source[:pos].encode("utf-8"))
            )
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if text == "−":
                text = "-"
            # offsets are byte offsets into the UTF-8 source
            tokens.append((kind, text, len(source[:pos].encode("utf-8"))))
        pos = m.end()
    tokens.append(("end", "", len(source.encode("utf-8"))))
    return tokens


class _Parser:
    def __init__(self, source: str, dimension: int, allow_t: bool):
        self.tokens = _tokenize(source)
        self.i = 0
        self.dimension = dimension
        self.allow_t = allow_t

    @property
    def tok(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, value, pos = self.tok
        if value != text or kind == "end":
            found = "end of input" if kind == "end" else repr(value)
            raise ParseError(f"expected {text!r}, found {found}", pos)
        return self.take()

    def parse(self) -> Node:
        node = self.expr()
        kind, value, pos = self.tok
        if kind != "end":
            raise ParseError(f"unexpected token {value!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.tok[0] == "op" and self.tok[1] in "+-":
            _, op, pos = self.take()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.tok[0] == "op" and self.tok[1] in "*/":
            _, op, pos = self.take()
            node = BinOp(op, node, self.unary(), pos)
        return node

    def unary(self) -> Node:
        if self.tok[0] == "op" and self.tok[1] in "+-":
            _, op, pos = self.take()
            arg = self.unary()
            return Neg(arg, pos) if op == "-" else arg
        return self.factor()

    def factor(self) -> Node:
        node = self.base()
        if self.tok[0] == "op" and self.tok[1] == "^":
            _, _, pos = self.take()
            sign = 1
            if self.tok[0] == "op" and self.tok[1] == "-":
                self.take()
                sign = -1
            kind, value, vpos = self.tok
            if kind != "num" or not value.isdigit():
                raise ParseError("exponent must be an integer constant", vpos)
            self.take()
            node = Pow(node, sign * int(value), pos)
        return node

    def base(self) -> Node:
        kind, value, pos = self.tok
        if kind == "num":
            self.take()
            return Const(float(value), pos)
        if kind == "op" and value == "(":
            self.take()
            node = self.expr()
            self.expect(")")
            return node
        if kind == "ident":
            self.take()
            if value in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(value, arg, pos)
            if value == "t":
                if not self.allow_t:
                    raise ParseError("parameter 't' is not allowed here", pos)
                return Param(pos)
            m = re.fullmatch(r"x([1-9][0-9]*)", value)
            if m:
                k = int(m.group(1))
                if k > self.dimension:
                    raise ParseError(
                        f"variable {value} exceeds dimension {self.dimension}", pos
                    )
                return Var(k - 1, pos)
            raise ParseError(f"unknown identifier {value!r}", pos)
        found = "end of input" if kind == "end" else repr(value)
        raise ParseError(f"unexpected {found}", pos)


def parse(source: str, dimension: int, allow_t: bool = False) -> Expression:
    """Parse ``source`` into an :class:`Expression` over ``dimension`` coordinates."""
    if dimension < 0:
        raise ValueError("dimension must be non-negative")
    root = _Parser(source, dimension, allow_t).parse()
    return Expression(root, dimension, allow_t, source)


def to_source(expr: Expression | Node) -> str:
    """Canonical, fully parenthesised text form; parses back to the same tree."""
    node = expr.root if isinstance(expr, Expression) else expr
    if isinstance(node, Const):
        return repr(float(node.value))
    if isinstance(node, Var):
        return f"x{node.index + 1}"
    if isinstance(node, Param):
        return "t"
    if isinstance(node, Neg):
        return f"(-{to_source(node.arg)})"
    if isinstance(node, Call):
        return f"{node.func}({to_source(node.arg)})"
    if isinstance(node, BinOp):
        return f"({to_source(node.left)} {node.op} {to_source(node.right)})"
    if isinstance(node, Pow):
        return f"({to_source(node.base)}^{node.exponent})"
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# evaluation
# ---------------------------------------------------------------------------


def _real(v) -> float:
    return v.a if isinstance(v, Dual) else v


def _call(node: Call, x):
    name = node.func
    xr = _real(x)
    if name == "sqrt":
        if xr < 0 or (xr == 0 and isinstance(x, Dual)):
            raise DomainError(f"sqrt of {xr!r}", node.pos)
    elif name == "log":
        if xr <= 0:
            raise DomainError(f"log of nonpositive {xr!r}", node.pos)
    if isinstance(x, Dual):
        return getattr(x, name)()
    try:
        return _MATH[name](x)
    except OverflowError as exc:
        raise DomainError(f"{name} overflow", node.pos) from exc


_MATH = {
    "sin": math.sin,
    "cos": math.cos,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
}


def _compile(node: Node):
    """Turn a tree into nested closures ``f(env, t)``; works on floats and Duals alike."""
    if isinstance(node, Const):
        value = node.value
        return lambda env, t: value
    if isinstance(node, Var):
        index = node.index
        return lambda env, t: env[index]
    if isinstance(node, Param):
        def param(env, t):
            if t is None:
                raise ExpressionError("parameter t has no value", node.pos)
            return t
        return param
    if isinstance(node, Neg):
        arg = _compile(node.arg)
        return lambda env, t: -arg(env, t)
    if isinstance(node, Call):
        arg = _compile(node.arg)
        return lambda env, t: _call(node, arg(env, t))
    if isinstance(node, Pow):
        base, k = _compile(node.base), node.exponent

        def power(env, t):
            b = base(env, t)
            if k < 0 and _real(b) == 0:
                raise DomainError("zero raised to a negative power", node.pos)
            try:
                return b**k
            except OverflowError as exc:
                raise DomainError("power overflow", node.pos) from exc
        return power
    if isinstance(node, BinOp):
        left, right = _compile(node.left), _compile(node.right)
        if node.op == "+":
            return lambda env, t: left(env, t) + right(env, t)
        if node.op == "-":
            return lambda env, t: left(env, t) - right(env, t)
        if node.op == "*":
            return lambda env, t: left(env, t) * right(env, t)

        def divide(env, t):
            num = left(env, t)
            den = right(env, t)
            if _real(den) == 0:
                raise DomainError("division by zero", node.pos)
            return num / den
        return divide
    raise TypeError(f"not an expression node: {node!r}")


def _check_point(expr: Expression, point) -> tuple:
    pt = tuple(float(v) for v in point)
    if len(pt) != expr.dimension:
        raise ValueError(
            f"point has length {len(pt)}, expression dimension is {expr.dimension}"
        )
    return pt


def evaluate(expr: Expression, point: Sequence[float] = (), t: float | None = None) -> float:
    """Value of ``expr`` at ``point`` (and curve parameter ``t``)."""
    pt = _check_point(expr, point)
    return float(expr._fn(pt, None if t is None else float(t)))


def _seeded_pass(expr: Expression, pt: tuple, t, k) -> Dual:
    if k == "t":
        env = pt
        tt = Dual(float(t), 1.0)
    else:
        env = tuple(Dual(v, 1.0 if j == k else 0.0) for j, v in enumerate(pt))
        tt = None if t is None else Dual(float(t), 0.0)
    out = expr._fn(env, tt)
    if not isinstance(out, Dual):
        # expression independent of the seeded variable
        out = Dual(float(out), 0.0)
    return out


def eval_with_gradient(
    expr: Expression, point: Sequence[float], t: float | None = None
) -> tuple[float, np.ndarray]:
    """Value and exact gradient with respect to the chart coordinates."""
    pt = _check_point(expr, point)
    n = len(pt)
    if n == 0:
        return evaluate(expr, pt, t), np.zeros(0)
    grad = np.empty(n)
    value = None
    for k in range(n):
        d = _seeded_pass(expr, pt, t, k)
        value = d.a
        grad[k] = d.b
    return float(value), grad


def eval_with_time_derivative(
    expr: Expression, t: float, point: Sequence[float] = ()
) -> tuple[float, float]:
    """Value and derivative with respect to the curve parameter ``t``."""
    if not expr.uses_t:
        return evaluate(expr, point), 0.0
    pt = _check_point(expr, point)
    d = _seeded_pass(expr, pt, t, "t")
    return float(d.a), float(d.b)
