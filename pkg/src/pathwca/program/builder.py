"""In-code builder: structured statements lowered to a statement graph.

    b = Builder("demo", scale={"N": 4})
    A = b.input_array("A", 4, 1, 4)
    i = b.local("i")
    b.main(
        While(i < 4, [If(A[i] < 2, [Cost(1)]), Set(i, i + 1)]),
    )
    program = b.build()

Lowering allocates statement ids in source order, so the first statement of
the main body gets id 1 and is the entry.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional, Sequence

from ..errors import ProgramError
from .expr import Const, Expr, Index, Var, lift
from .model import ArrayInput, InputSpec, Program, ScalarInput, Statement


# -- structured nodes ----------------------------------------------------------

@dataclass
class Set:
    target: Expr
    value: object


@dataclass
class Cost:
    value: object


@dataclass
class If:
    cond: Expr
    then: Sequence = ()
    orelse: Sequence = ()
    always_sat: bool = False


@dataclass
class While:
    cond: Expr
    body: Sequence = ()
    always_sat: bool = False


@dataclass
class Break:
    pass


@dataclass
class Halt:
    pass


@dataclass
class Call:
    name: str


@dataclass
class Return:
    pass


# -- lowering --------------------------------------------------------------------

@dataclass
class _Stmt:
    id: int
    kind: str
    expr: Optional[Expr] = None
    out: list = field(default_factory=list)
    target: Optional[Expr] = None
    callee: object = None
    always_sat: bool = False


class Builder:
    def __init__(self, name: str, scale: Optional[dict] = None):
        self.name = name
        self.scale = dict(scale or {})
        self._scalars: list[ScalarInput] = []
        self._arrays: list[ArrayInput] = []
        self._locals: list[str] = []
        self._local_arrays: list[tuple[str, int]] = []
        self._main: list = []
        self._subs: dict[str, list] = {}

    # declarations
    def param(self, name: str) -> Var:
        if name not in self.scale:
            raise ProgramError(f"unknown scale parameter {name}")
        return Var(name)

    def input_scalar(self, name: str, lo: int, hi: int) -> Var:
        self._scalars.append(ScalarInput(name, lo, hi))
        return Var(name)

    def input_array(self, name: str, length: int, lo: int, hi: int) -> Var:
        self._arrays.append(ArrayInput(name, length, lo, hi))
        return Var(name)

    def local(self, *names: str):
        self._locals.extend(names)
        vs = tuple(Var(n) for n in names)
        return vs[0] if len(vs) == 1 else vs

    def local_array(self, name: str, size: int) -> Var:
        self._local_arrays.append((name, size))
        return Var(name)

    def main(self, *body):
        self._main.extend(body)

    def sub(self, name: str, *body):
        self._subs[name] = list(body)

    # lowering
    def build(self) -> Program:
        self._stmts: list[_Stmt] = []
        self._calls: list[_Stmt] = []
        self._loop_exits: list[list] = []

        entry, holes = self._seq(self._main)
        final = self._new("halt")
        self._patch(holes, final.id)
        if entry is None:
            entry = final.id

        sub_entries = {}
        for name, body in self._subs.items():
            e, h = self._seq(body)
            ret = self._new("return")
            ret.out = [final.id]
            self._patch(h, ret.id)
            sub_entries[name] = e if e is not None else ret.id
        for s in self._stmts:
            if s.kind == "return" and not s.out:
                s.out = [final.id]
        for c in self._calls:
            if c.callee not in sub_entries:
                raise ProgramError(f"call to unknown subroutine {c.callee!r}")
            c.callee = sub_entries[c.callee]

        stmts = tuple(
            Statement(s.id, s.kind, s.expr, tuple(s.out), s.target, s.callee, s.always_sat)
            for s in self._stmts
        )
        if stmts[0].id != entry:
            raise ProgramError("entry must be the first statement")
        return Program(
            name=self.name,
            statements=stmts,
            input_spec=InputSpec(tuple(self._scalars), tuple(self._arrays)),
            scale_params=tuple(self.scale.items()),
            local_scalars=tuple(self._locals),
            local_arrays=tuple(self._local_arrays),
        )

    def _new(self, kind, **kw) -> _Stmt:
        s = _Stmt(len(self._stmts) + 1, kind, **kw)
        self._stmts.append(s)
        return s

    @staticmethod
    def _patch(holes, target):
        for stmt, slot in holes:
            stmt.out[slot] = target

    def _node(self, node):
        if isinstance(node, Set):
            if not isinstance(node.target, (Var, Index)):
                raise ProgramError("Set target must be a variable or array element")
            s = self._new("assign", expr=lift(node.value), target=node.target, out=[None])
            return s.id, [(s, 0)]
        if isinstance(node, Cost):
            s = self._new("add_cost", expr=lift(node.value), out=[None])
            return s.id, [(s, 0)]
        if isinstance(node, Halt):
            return self._new("halt").id, []
        if isinstance(node, Return):
            return self._new("return", out=[]).id, []
        if isinstance(node, Call):
            s = self._new("call", callee=node.name, out=[None])
            self._calls.append(s)
            return s.id, [(s, 0)]
        if isinstance(node, If):
            br = self._new("branch", expr=lift(node.cond), out=[None, None], always_sat=node.always_sat)
            holes = []
            t_entry, t_holes = self._seq(node.then)
            f_entry, f_holes = self._seq(node.orelse)
            if t_entry is None and f_entry is None:
                pad = self._new("add_cost", expr=Const(0), out=[None])
                t_entry, t_holes = pad.id, [(pad, 0)]
            if t_entry is None:
                holes.append((br, 1))
            else:
                br.out[1] = t_entry
                holes += t_holes
            if f_entry is None:
                holes.append((br, 0))
            else:
                br.out[0] = f_entry
                holes += f_holes
            return br.id, holes
        if isinstance(node, While):
            br = self._new("branch", expr=lift(node.cond), out=[None, None], always_sat=node.always_sat)
            self._loop_exits.append([])
            b_entry, b_holes = self._seq(node.body)
            exits = self._loop_exits.pop()
            br.out[1] = b_entry if b_entry is not None else br.id
            self._patch(b_holes, br.id)
            return br.id, [(br, 0)] + exits
        raise ProgramError(f"unknown node {node!r}")

    def _seq(self, nodes):
        """Lower a node list; returns (entry id or None, dangling exits)."""
        entry, holes = None, []
        for node in nodes:
            if isinstance(node, Break):
                if not self._loop_exits:
                    raise ProgramError("break outside loop")
                if entry is None:
                    # a bare break: route the incoming edge to the loop exit
                    pad = self._new("add_cost", expr=Const(0), out=[None])
                    entry = pad.id
                    self._loop_exits[-1].append((pad, 0))
                else:
                    self._loop_exits[-1].extend(holes)
                return entry, []
            e, h = self._node(node)
            if e is None:
                continue
            if entry is None:
                entry = e
            self._patch(holes, e)
            holes = h
        return entry, holes
