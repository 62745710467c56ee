"""Symbolic integer values and path conditions.

A symbolic integer is either a plain ``int`` or a :class:`Lin` (linear form
over solver variable ids). Boolean values are ``bool`` or a condition:
:class:`Atom` (``lin <= 0``, ``lin == 0`` or ``lin != 0``), :class:`Conj` or
:class:`Disj`. Every constructor folds constants, so an expression whose
variables cancel comes back as a concrete ``int``/``bool``.
"""
from __future__ import annotations

from math import gcd

LE, EQ, NE = 0, 1, 2
_OP_TEXT = {LE: "<=", EQ: "==", NE: "!="}


class Lin:
    __slots__ = ("terms", "const")

    def __init__(self, terms: dict, const: int = 0):
        self.terms = terms
        self.const = const

    @staticmethod
    def var(vid: int) -> "Lin":
        return Lin({vid: 1}, 0)

    def __add__(self, o):
        if type(o) is int:
            return Lin(self.terms, self.const + o) if o else self
        t = dict(self.terms)
        for v, c in o.terms.items():
            n = t.get(v, 0) + c
            if n:
                t[v] = n
            else:
                del t[v]
        if not t:
            return self.const + o.const
        return Lin(t, self.const + o.const)

    __radd__ = __add__

    def __neg__(self):
        return Lin({v: -c for v, c in self.terms.items()}, -self.const)

    def __sub__(self, o):
        return self + (-o)

    def __rsub__(self, o):
        return (-self) + o

    def __mul__(self, o):
        if type(o) is not int:
            from ..errors import UnsupportedFeature

            raise UnsupportedFeature("nonlinear product of symbolic values")
        if o == 0:
            return 0
        return Lin({v: c * o for v, c in self.terms.items()}, self.const * o)

    __rmul__ = __mul__

    def __eq__(self, o):
        return isinstance(o, Lin) and self.terms == o.terms and self.const == o.const

    def __hash__(self):
        return hash((frozenset(self.terms.items()), self.const))

    def key(self):
        return (tuple(sorted(self.terms.items())), self.const)

    def value(self, model) -> int:
        s = self.const
        for v, c in self.terms.items():
            s += c * model[v]
        return s

    def __repr__(self):
        return f"Lin({self.terms}, {self.const})"


class Atom:
    """Normalized ``sum(coef * x) + const  (op)  0`` with gcd-reduced coefficients."""

    __slots__ = ("op", "coefs", "const", "_hash", "cols", "vals")

    def __init__(self, op: int, coefs: tuple, const: int):
        self.op = op
        self.coefs = coefs
        self.const = const
        self._hash = hash((op, coefs, const))
        # split columns for fast copying into solver rows
        self.cols = [v for v, _ in coefs]
        self.vals = [c for _, c in coefs]

    def __eq__(self, o):
        return isinstance(o, Atom) and self.op == o.op and self.coefs == o.coefs and self.const == o.const

    def __hash__(self):
        return self._hash

    def holds(self, model) -> bool:
        s = self.const
        for v, c in self.coefs:
            s += c * model[v]
        if self.op == LE:
            return s <= 0
        if self.op == EQ:
            return s == 0
        return s != 0

    def variables(self):
        return [v for v, _ in self.coefs]

    def __repr__(self):
        lhs = " + ".join(f"{c}*x{v}" for v, c in self.coefs) or "0"
        return f"({lhs} + {self.const} {_OP_TEXT[self.op]} 0)"


class Conj:
    __slots__ = ("parts",)

    def __init__(self, parts: tuple):
        self.parts = parts

    def holds(self, model) -> bool:
        return all(p.holds(model) for p in self.parts)

    def __eq__(self, o):
        return isinstance(o, Conj) and self.parts == o.parts

    def __hash__(self):
        return hash(("and", self.parts))

    def __repr__(self):
        return "And" + repr(self.parts)


class Disj:
    __slots__ = ("parts",)

    def __init__(self, parts: tuple):
        self.parts = parts

    def holds(self, model) -> bool:
        return any(p.holds(model) for p in self.parts)

    def __eq__(self, o):
        return isinstance(o, Disj) and self.parts == o.parts

    def __hash__(self):
        return hash(("or", self.parts))

    def __repr__(self):
        return "Or" + repr(self.parts)


def make_atom(op: int, lin):
    """Atom for ``lin (op) 0``; folds to ``bool`` when ``lin`` is concrete."""
    if type(lin) is int:
        if op == LE:
            return lin <= 0
        if op == EQ:
            return lin == 0
        return lin != 0
    items = sorted(lin.terms.items())
    const = lin.const
    g = 0
    for _, c in items:
        g = gcd(g, c)
    if op == LE:
        if g > 1:
            items = [(v, c // g) for v, c in items]
            const = -((-const) // g)  # ceil(const / g)
    else:
        if const % g:
            return op == NE
        if items[0][1] < 0:
            g = -g
        if g != 1:
            items = [(v, c // g) for v, c in items]
            const //= g
    return Atom(op, tuple(items), const)


def negate(c):
    if type(c) is bool:
        return not c
    if type(c) is Atom:
        if c.op == LE:
            # not (e <= 0)  <=>  -e + 1 <= 0
            return Atom(LE, tuple((v, -k) for v, k in c.coefs), 1 - c.const)
        return Atom(NE if c.op == EQ else EQ, c.coefs, c.const)
    if type(c) is Conj:
        return Disj(tuple(negate(p) for p in c.parts))
    return Conj(tuple(negate(p) for p in c.parts))


def and_(a, b):
    if a is False or b is False:
        return False
    if a is True:
        return b
    if b is True:
        return a
    pa = a.parts if type(a) is Conj else (a,)
    pb = b.parts if type(b) is Conj else (b,)
    return Conj(pa + pb)


def or_(a, b):
    if a is True or b is True:
        return True
    if a is False:
        return b
    if b is False:
        return a
    pa = a.parts if type(a) is Disj else (a,)
    pb = b.parts if type(b) is Disj else (b,)
    return Disj(pa + pb)


# comparisons over int | Lin --------------------------------------------------

def lt(a, b):
    return make_atom(LE, a - b + 1)


def le(a, b):
    return make_atom(LE, a - b)


def gt(a, b):
    return make_atom(LE, b - a + 1)


def ge(a, b):
    return make_atom(LE, b - a)


def eq(a, b):
    return make_atom(EQ, a - b)


def ne(a, b):
    return make_atom(NE, a - b)


def holds(c, model) -> bool:
    if type(c) is bool:
        return c
    return c.holds(model)


def cond_vars(c, out=None) -> set:
    out = set() if out is None else out
    if type(c) is Atom:
        out.update(v for v, _ in c.coefs)
    elif type(c) in (Conj, Disj):
        for p in c.parts:
            cond_vars(p, out)
    return out


def split(c):
    """Flatten a condition into (atoms, disjunctions) whose conjunction is ``c``."""
    atoms, ors = [], []
    stack = [c]
    while stack:
        x = stack.pop()
        if x is True:
            continue
        if x is False:
            atoms.append(Atom(LE, (), 1))  # 1 <= 0
        elif type(x) is Atom:
            atoms.append(x)
        elif type(x) is Conj:
            stack.extend(reversed(x.parts))
        else:
            ors.append(x)
    return atoms, ors
