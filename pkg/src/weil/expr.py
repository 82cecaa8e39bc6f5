"""Expressions in a fixed set of variables: AST, parser, printer, evaluation.

Grammar::

    expr   := term (("+"|"-") term)*
    term   := factor (("*"|"/") factor)*
    factor := atom ("^" integer)? | "-" factor
    atom   := number | ident | ident "(" expr ")" | "(" expr ")"
    number := integer ("/" integer | "." digits)?

A number token only absorbs ``/`` when digits follow immediately, so
``1/2`` is the constant one half while ``1 / 2`` is a division.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Sequence, Union

FUNCTIONS = ("exp", "log", "sin", "cos", "sqrt")


class ExprSyntaxError(ValueError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at position {position}")
        self.position = position


class UnknownIdentifier(ValueError):
    pass


@dataclass(frozen=True)
class Const:
    value: Union[Fraction, float]


@dataclass(frozen=True)
class Var:
    index: int


@dataclass(frozen=True)
class Add:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Sub:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Mul:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Div:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    base: "Expr"
    exponent: int

    def __post_init__(self):
        if not isinstance(self.exponent, int) or self.exponent < 0:
            raise ValueError("powers must be non-negative integers")


@dataclass(frozen=True)
class Neg:
    operand: "Expr"


@dataclass(frozen=True)
class Call:
    name: str
    arg: "Expr"

    def __post_init__(self):
        if self.name not in FUNCTIONS:
            raise UnknownIdentifier(f"unknown function {self.name!r}")


Expr = Union[Const, Var, Add, Sub, Mul, Div, Pow, Neg, Call]
_BINARY = (Add, Sub, Mul, Div)


def default_var_names(m: int) -> tuple[str, ...]:
    if m == 1:
        return ("x",)
    return tuple(f"x{i}" for i in range(1, m + 1))


# -- tokenizer and parser -------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:/\d+|\.\d+)?)|(?P<ident>[A-Za-z][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


def _tokenize(text: str):
    pos = 0
    tokens = []
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None or m.end() == pos:
            raise ExprSyntaxError(f"unexpected character {text[pos]!r}", pos)
        start = m.start(m.lastgroup)
        tokens.append((m.lastgroup, m.group(m.lastgroup), start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str, names: Sequence[str]):
        self.tokens = _tokenize(text)
        self.i = 0
        self.names = {n: k for k, n in enumerate(names)}

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ExprSyntaxError(f"expected {op!r}, found {val or 'end of input'!r}", pos)

    def expr(self):
        node = self.term()
        while self.peek()[0] == "op" and self.peek()[1] in "+-":
            op = self.take()[1]
            rhs = self.term()
            node = Add(node, rhs) if op == "+" else Sub(node, rhs)
        return node

    def term(self):
        node = self.factor()
        while self.peek()[0] == "op" and self.peek()[1] in "*/":
            op = self.take()[1]
            rhs = self.factor()
            node = Mul(node, rhs) if op == "*" else Div(node, rhs)
        return node

    def factor(self):
        kind, val, _ = self.peek()
        if kind == "op" and val == "-":
            self.take()
            return Neg(self.factor())
        node = self.atom()
        if self.peek()[0] == "op" and self.peek()[1] == "^":
            self.take()
            kind, val, pos = self.take()
            if kind != "num" or not val.isdigit():
                raise ExprSyntaxError(f"exponent must be a non-negative integer, found {val or 'end of input'!r}", pos)
            node = Pow(node, int(val))
        return node

    def atom(self):
        kind, val, pos = self.take()
        if kind == "num":
            return Const(Fraction(val))
        if kind == "ident":
            if self.peek()[0] == "op" and self.peek()[1] == "(":
                if val not in FUNCTIONS:
                    raise UnknownIdentifier(f"unknown function {val!r} at position {pos}")
                self.take()
                arg = self.expr()
                self.expect(")")
                return Call(val, arg)
            if val not in self.names:
                raise UnknownIdentifier(f"unknown identifier {val!r} at position {pos}")
            return Var(self.names[val])
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected token {val or 'end of input'!r}", pos)


def parse_expr(text: str, names: Sequence[str] = ("x",)) -> Expr:
    p = _Parser(text, names)
    node = p.expr()
    kind, val, pos = p.peek()
    if kind != "end":
        raise ExprSyntaxError(f"unexpected token {val!r}", pos)
    return node


def identifiers(text: str) -> list[str]:
    """Variable names used in ``text`` (function names excluded), in natural order."""
    found = set()
    tokens = _tokenize(text)
    for k, (kind, val, _) in enumerate(tokens):
        if kind == "ident":
            nxt = tokens[k + 1]
            if not (nxt[0] == "op" and nxt[1] == "(" and val in FUNCTIONS):
                found.add(val)
    return sorted(found, key=_natural_key)


def _natural_key(name: str):
    return [int(part) if part.isdigit() else part for part in re.split(r"(\d+)", name)]


# -- printer ----------------------------------------------------------------------

_LEVEL = {Add: 1, Sub: 1, Mul: 2, Div: 2, Neg: 3, Pow: 4}


def _level(e: Expr) -> int:
    if isinstance(e, Const):
        return 5 if e.value >= 0 else 0
    return _LEVEL.get(type(e), 5)


def to_string(e: Expr, names: Sequence[str] = ("x",)) -> str:
    def wrap(sub, ok: bool) -> str:
        s = to_string(sub, names)
        return s if ok else f"({s})"

    if isinstance(e, Const):
        v = e.value
        if isinstance(v, Fraction):
            s = str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
        else:
            s = repr(float(v))
        return s if _level(e) == 5 else f"({s})"
    if isinstance(e, Var):
        return names[e.index]
    if isinstance(e, Call):
        return f"{e.name}({to_string(e.arg, names)})"
    if isinstance(e, Neg):
        return "-" + wrap(e.operand, _level(e.operand) >= 3)
    if isinstance(e, Pow):
        return f"{wrap(e.base, _level(e.base) == 5)}^{e.exponent}"
    op = {Add: "+", Sub: "-", Mul: "*", Div: "/"}[type(e)]
    lv = _LEVEL[type(e)]
    return f"{wrap(e.left, _level(e.left) >= lv)} {op} {wrap(e.right, _level(e.right) > lv)}"


# -- structure --------------------------------------------------------------------


def arity(e: Expr) -> int:
    """One more than the largest variable index used (0 for constants)."""
    if isinstance(e, Var):
        return e.index + 1
    if isinstance(e, Const):
        return 0
    return max(arity(c) for c in children(e))


def children(e: Expr) -> tuple:
    if isinstance(e, _BINARY):
        return (e.left, e.right)
    if isinstance(e, Pow):
        return (e.base,)
    if isinstance(e, Neg):
        return (e.operand,)
    if isinstance(e, Call):
        return (e.arg,)
    return ()


def is_polynomial(e: Expr) -> bool:
    if isinstance(e, (Div, Call)):
        return False
    if isinstance(e, Const):
        return isinstance(e.value, Fraction)
    return all(is_polynomial(c) for c in children(e))


def substitute(e: Expr, images: Sequence[Expr]) -> Expr:
    """Replace variable ``i`` by ``images[i]``."""
    if isinstance(e, Var):
        return images[e.index]
    if isinstance(e, Const):
        return e
    if isinstance(e, _BINARY):
        return type(e)(substitute(e.left, images), substitute(e.right, images))
    if isinstance(e, Pow):
        return Pow(substitute(e.base, images), e.exponent)
    if isinstance(e, Neg):
        return Neg(substitute(e.operand, images))
    return Call(e.name, substitute(e.arg, images))


# -- evaluation ---------------------------------------------------------------------


def evaluate(
    e: Expr,
    values: Sequence,
    const: Callable = lambda c: c,
    div: Callable = lambda a, b: a / b,
    call: Callable | None = None,
):
    """Evaluate homomorphically over any ring-like value type.

    ``const`` lifts constants, ``div`` and ``call`` implement division and
    the elementary functions.
    """
    def go(node):
        if isinstance(node, Var):
            return values[node.index]
        if isinstance(node, Const):
            return const(node.value)
        if isinstance(node, Add):
            return go(node.left) + go(node.right)
        if isinstance(node, Sub):
            return go(node.left) - go(node.right)
        if isinstance(node, Mul):
            return go(node.left) * go(node.right)
        if isinstance(node, Div):
            return div(go(node.left), go(node.right))
        if isinstance(node, Neg):
            return -go(node.operand)
        if isinstance(node, Pow):
            base = go(node.base)
            result = None
            for _ in range(node.exponent):
                result = base if result is None else result * base
            return const(Fraction(1)) if result is None else result
        if call is None:
            raise TypeError(f"no implementation for {node.name}")
        return call(node.name, go(node.arg))

    return go(e)


def evaluate_rational(e: Expr, point: Sequence) -> Fraction:
    """Exact value of a polynomial expression at a rational point."""
    if not is_polynomial(e):
        raise TypeError("exact evaluation needs a polynomial expression")
    return evaluate(e, [Fraction(x) for x in point])


# -- polynomial expansion -----------------------------------------------------------

Poly = dict  # {exponent tuple: Fraction}


def _poly_mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for a, c in p.items():
        for b, d in q.items():
            k = tuple(x + y for x, y in zip(a, b))
            out[k] = out.get(k, 0) + c * d
    return {k: v for k, v in out.items() if v}


def expand(e: Expr, m: int) -> Poly:
    """Coefficients of a polynomial expression in ``m`` variables."""
    zero = (0,) * m
    if isinstance(e, Const):
        if not isinstance(e.value, Fraction):
            raise TypeError("expansion needs rational constants")
        return {zero: e.value} if e.value else {}
    if isinstance(e, Var):
        return {tuple(int(i == e.index) for i in range(m)): Fraction(1)}
    if isinstance(e, (Add, Sub)):
        out = dict(expand(e.left, m))
        sign = 1 if isinstance(e, Add) else -1
        for k, v in expand(e.right, m).items():
            out[k] = out.get(k, 0) + sign * v
        return {k: v for k, v in out.items() if v}
    if isinstance(e, Mul):
        return _poly_mul(expand(e.left, m), expand(e.right, m))
    if isinstance(e, Neg):
        return {k: -v for k, v in expand(e.operand, m).items()}
    if isinstance(e, Pow):
        base = expand(e.base, m)
        out = {zero: Fraction(1)}
        for _ in range(e.exponent):
            out = _poly_mul(out, base)
        return out
    raise TypeError("expansion needs a polynomial expression")


def degree(e: Expr, m: int | None = None) -> int:
    """Total degree of a polynomial expression (-1 for the zero polynomial)."""
    poly = expand(e, m if m is not None else max(arity(e), 1))
    return max((sum(k) for k in poly), default=-1)


def from_poly(poly: Poly) -> Expr:
    """Build an expression from a coefficient dictionary."""
    node = None
    for exps in sorted(poly, key=lambda k: (sum(k), k)):
        term: Expr = Const(Fraction(poly[exps]))
        for i, e in enumerate(exps):
            if e:
                factor = Var(i) if e == 1 else Pow(Var(i), e)
                term = factor if (isinstance(term, Const) and term.value == 1) else Mul(term, factor)
        node = term if node is None else Add(node, term)
    return node if node is not None else Const(Fraction(0))
