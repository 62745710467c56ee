"""Expression trees for the analyzable statement language.

Integer expressions: literals, scalar variables, array reads and the binary
operators ``+ - * // %``. Boolean expressions: comparisons ``< <= == !=``,
``and``/``or``/``not`` and the literals ``true``/``false``.

Nodes overload the arithmetic operators and ``< <= > >=`` so benchmark code
can be written naturally; equality tests use :func:`eq` / :func:`ne` because
``==`` keeps its structural meaning on the frozen dataclasses.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from ..errors import ProgramError

ARITH_OPS = ("+", "-", "*", "//", "%")
CMP_OPS = ("<", "<=", "==", "!=")
BOOL_OPS = ("and", "or")


def lift(x) -> "Expr":
    if isinstance(x, Expr):
        return x
    if isinstance(x, bool):
        return BoolConst(x)
    if isinstance(x, int):
        return Const(x)
    raise TypeError(f"cannot use {x!r} in an expression")


class Expr:
    __slots__ = ()

    def __add__(self, o):
        return BinOp("+", self, lift(o))

    def __radd__(self, o):
        return BinOp("+", lift(o), self)

    def __sub__(self, o):
        return BinOp("-", self, lift(o))

    def __rsub__(self, o):
        return BinOp("-", lift(o), self)

    def __mul__(self, o):
        return BinOp("*", self, lift(o))

    def __rmul__(self, o):
        return BinOp("*", lift(o), self)

    def __floordiv__(self, o):
        return BinOp("//", self, lift(o))

    def __mod__(self, o):
        return BinOp("%", self, lift(o))

    def __neg__(self):
        return BinOp("-", Const(0), self)

    def __lt__(self, o):
        return Cmp("<", self, lift(o))

    def __le__(self, o):
        return Cmp("<=", self, lift(o))

    def __gt__(self, o):
        return Cmp("<", lift(o), self)

    def __ge__(self, o):
        return Cmp("<=", lift(o), self)

    def __getitem__(self, idx):
        if isinstance(self, Var):
            return Index(self.name, lift(idx))
        raise TypeError("only named arrays can be indexed")

    def __str__(self):
        return to_text(self)


@dataclass(frozen=True, eq=True)
class Const(Expr):
    value: int


@dataclass(frozen=True, eq=True)
class BoolConst(Expr):
    value: bool


@dataclass(frozen=True, eq=True)
class Var(Expr):
    name: str


@dataclass(frozen=True, eq=True)
class Index(Expr):
    array: str
    index: Expr


@dataclass(frozen=True, eq=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Cmp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class BoolOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True, eq=True)
class Not(Expr):
    operand: Expr


Expression = Union[Const, BoolConst, Var, Index, BinOp, Cmp, BoolOp, Not]


def eq(a, b) -> Cmp:
    return Cmp("==", lift(a), lift(b))


def ne(a, b) -> Cmp:
    return Cmp("!=", lift(a), lift(b))


def and_(*xs) -> Expr:
    out = lift(xs[0])
    for x in xs[1:]:
        out = BoolOp("and", out, lift(x))
    return out


def or_(*xs) -> Expr:
    out = lift(xs[0])
    for x in xs[1:]:
        out = BoolOp("or", out, lift(x))
    return out


def not_(x) -> Not:
    return Not(lift(x))


def is_bool(e: Expr) -> bool:
    return isinstance(e, (Cmp, BoolOp, Not, BoolConst))


def walk(e: Expr):
    yield e
    if isinstance(e, Index):
        yield from walk(e.index)
    elif isinstance(e, (BinOp, Cmp, BoolOp)):
        yield from walk(e.left)
        yield from walk(e.right)
    elif isinstance(e, Not):
        yield from walk(e.operand)


def type_errors(e: Expr, want_bool: bool) -> list[str]:
    """Return human readable typing problems, empty if ``e`` is well typed."""
    errs: list[str] = []

    def check(x: Expr, want: bool):
        got = is_bool(x)
        if got != want:
            errs.append(f"expected {'boolean' if want else 'integer'} expression, got {to_text(x)!r}")
            return
        if isinstance(x, Index):
            check(x.index, False)
        elif isinstance(x, BinOp):
            if x.op not in ARITH_OPS:
                errs.append(f"unknown arithmetic operator {x.op!r}")
            check(x.left, False)
            check(x.right, False)
        elif isinstance(x, Cmp):
            if x.op not in CMP_OPS:
                errs.append(f"unknown comparison {x.op!r}")
            check(x.left, False)
            check(x.right, False)
        elif isinstance(x, BoolOp):
            if x.op not in BOOL_OPS:
                errs.append(f"unknown boolean operator {x.op!r}")
            check(x.left, True)
            check(x.right, True)
        elif isinstance(x, Not):
            check(x.operand, True)

    check(e, want_bool)
    return errs


# -- text form ---------------------------------------------------------------

def _wrap(e: Expr) -> str:
    s = to_text(e)
    if isinstance(e, (BinOp, Cmp, BoolOp, Not)):
        return f"({s})"
    return s


def to_text(e: Expr) -> str:
    if isinstance(e, Const):
        return str(e.value)
    if isinstance(e, BoolConst):
        return "true" if e.value else "false"
    if isinstance(e, Var):
        return e.name
    if isinstance(e, Index):
        return f"{e.array}[{to_text(e.index)}]"
    if isinstance(e, (BinOp, Cmp, BoolOp)):
        return f"{_wrap(e.left)} {e.op} {_wrap(e.right)}"
    if isinstance(e, Not):
        return f"not {_wrap(e.operand)}"
    raise TypeError(f"not an expression: {e!r}")


_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(<=|==|!=|//|[<+\-*%()\[\]]))")


def _tokenize(s: str) -> list[str]:
    pos, out = 0, []
    s = s.rstrip()
    while pos < len(s):
        m = _TOKEN.match(s, pos)
        if not m or m.end() == pos:
            raise ProgramError(f"bad expression near {s[pos:]!r}")
        out.append(m.group(1) or m.group(2) or m.group(3))
        pos = m.end()
    return out


class _Parser:
    def __init__(self, text: str):
        self.toks = _tokenize(text)
        self.i = 0
        self.text = text

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else None

    def take(self, want=None):
        t = self.peek()
        if t is None or (want is not None and t != want):
            raise ProgramError(f"expected {want or 'token'} in {self.text!r}")
        self.i += 1
        return t

    def parse(self) -> Expr:
        e = self.or_expr()
        if self.peek() is not None:
            raise ProgramError(f"trailing input {self.peek()!r} in {self.text!r}")
        return e

    def or_expr(self):
        e = self.and_expr()
        while self.peek() == "or":
            self.take()
            e = BoolOp("or", e, self.and_expr())
        return e

    def and_expr(self):
        e = self.not_expr()
        while self.peek() == "and":
            self.take()
            e = BoolOp("and", e, self.not_expr())
        return e

    def not_expr(self):
        if self.peek() == "not":
            self.take()
            return Not(self.not_expr())
        return self.comparison()

    def comparison(self):
        e = self.additive()
        if self.peek() in CMP_OPS:
            op = self.take()
            e = Cmp(op, e, self.additive())
        return e

    def additive(self):
        e = self.term()
        while self.peek() in ("+", "-"):
            op = self.take()
            e = BinOp(op, e, self.term())
        return e

    def term(self):
        e = self.unary()
        while self.peek() in ("*", "//", "%"):
            op = self.take()
            e = BinOp(op, e, self.unary())
        return e

    def unary(self):
        if self.peek() == "-":
            self.take()
            t = self.peek()
            if t is not None and t.isdigit():
                self.take()
                return Const(-int(t))
            return BinOp("-", Const(0), self.unary())
        return self.atom()

    def atom(self):
        t = self.take()
        if t == "(":
            e = self.or_expr()
            self.take(")")
            return e
        if t.isdigit():
            return Const(int(t))
        if t == "true":
            return BoolConst(True)
        if t == "false":
            return BoolConst(False)
        if t in ("and", "or", "not") or not (t[0].isalpha() or t[0] == "_"):
            raise ProgramError(f"unexpected {t!r} in {self.text!r}")
        if self.peek() == "[":
            self.take()
            idx = self.or_expr()
            self.take("]")
            return Index(t, idx)
        return Var(t)


def parse_expr(text: str) -> Expr:
    return _Parser(text).parse()
