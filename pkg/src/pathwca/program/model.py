"""Program representation: a statement graph over bounded integer inputs."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from ..errors import NotFound
from .expr import Expr, Index, Var, type_errors, walk

KINDS = ("assign", "branch", "add_cost", "call", "return", "halt")
ARITY = {"assign": 1, "branch": 2, "add_cost": 1, "call": 1, "return": 1, "halt": 0}


@dataclass(frozen=True)
class ScalarInput:
    name: str
    lo: int
    hi: int


@dataclass(frozen=True)
class ArrayInput:
    name: str
    length: int
    lo: int
    hi: int


@dataclass(frozen=True)
class InputSpec:
    scalars: tuple[ScalarInput, ...] = ()
    arrays: tuple[ArrayInput, ...] = ()

    def variables(self) -> list[tuple[str, int, int]]:
        """Flat (name, lo, hi) list: scalars first, then array elements in order."""
        out = [(s.name, s.lo, s.hi) for s in self.scalars]
        for a in self.arrays:
            out.extend((f"{a.name}[{k}]", a.lo, a.hi) for k in range(a.length))
        return out

    def size(self) -> int:
        return len(self.scalars) + sum(a.length for a in self.arrays)


@dataclass(frozen=True)
class Statement:
    """One node of the statement graph.

    ``out`` lists successor ids; for a branch it is ``(false_succ, true_succ)``.
    ``target`` is the assigned location (``Var`` or ``Index``) for ``assign``.
    ``callee`` is the entry statement id for ``call``.
    """

    id: int
    kind: str
    expr: Optional[Expr] = None
    out: tuple[int, ...] = ()
    target: Optional[Expr] = None
    callee: Optional[int] = None
    always_sat: bool = False


@dataclass(frozen=True)
class Program:
    name: str
    statements: tuple[Statement, ...]
    input_spec: InputSpec
    scale_params: tuple[tuple[str, int], ...] = ()
    local_scalars: tuple[str, ...] = ()
    local_arrays: tuple[tuple[str, int], ...] = ()
    _cache: dict = field(default_factory=dict, compare=False, hash=False, repr=False)

    @property
    def entry(self) -> int:
        return self.statements[0].id

    @property
    def scale(self) -> dict[str, int]:
        return dict(self.scale_params)

    def statement(self, stmt_id: int) -> Statement:
        idx = self.index_of().get(stmt_id)
        if idx is None:
            raise NotFound(f"no statement with id {stmt_id}")
        return self.statements[idx]

    def index_of(self) -> dict[int, int]:
        m = self._cache.get("index_of")
        if m is None:
            m = {s.id: k for k, s in enumerate(self.statements)}
            self._cache["index_of"] = m
        return m


def successors(program: Program, stmt_id: int) -> list[int]:
    """OUT(s) in declared order; for a branch ``[false_succ, true_succ]``."""
    return list(program.statement(stmt_id).out)


@dataclass(frozen=True)
class Issue:
    severity: str  # "error" | "warning"
    code: str
    message: str
    stmt_id: Optional[int] = None

    def __str__(self):
        where = f"stmt {self.stmt_id}: " if self.stmt_id is not None else ""
        return f"{self.severity}: {where}{self.code}: {self.message}"


@dataclass
class ValidationReport:
    issues: list[Issue] = field(default_factory=list)

    @property
    def errors(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "error"]

    @property
    def warnings(self) -> list[Issue]:
        return [i for i in self.issues if i.severity == "warning"]

    @property
    def ok(self) -> bool:
        return not self.errors

    def codes(self) -> set[str]:
        return {i.code for i in self.issues}

    def __len__(self):
        return len(self.issues)

    def __iter__(self):
        return iter(self.issues)

    def __str__(self):
        return "\n".join(map(str, self.issues)) or "ok"


def _edges(s: Statement) -> tuple[int, ...]:
    if s.kind == "call" and s.callee is not None:
        return s.out + (s.callee,)
    return s.out


def reachable(program: Program) -> set[int]:
    ids = program.index_of()
    seen = {program.entry}
    todo = deque([program.entry])
    while todo:
        sid = todo.popleft()
        for nxt in _edges(program.statements[ids[sid]]):
            if nxt in ids and nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


def validate(program: Program) -> ValidationReport:
    """Check every structural invariant; never raises."""
    rep = ValidationReport()

    def err(code, msg, sid=None):
        rep.issues.append(Issue("error", code, msg, sid))

    if not program.statements:
        err("empty", "program has no statements")
        return rep

    spec = program.input_spec
    scale = program.scale
    scalars = set(scale) | {s.name for s in spec.scalars} | set(program.local_scalars)
    arrays = {a.name for a in spec.arrays} | {name for name, _ in program.local_arrays}

    names = [s.name for s in spec.scalars] + [a.name for a in spec.arrays]
    names += list(program.local_scalars) + [n for n, _ in program.local_arrays] + list(scale)
    dup = {n for n in names if names.count(n) > 1}
    for n in sorted(dup):
        err("duplicate-name", f"name {n!r} declared more than once")

    for s in spec.scalars:
        if s.lo > s.hi:
            err("empty-interval", f"input {s.name} has empty interval [{s.lo}, {s.hi}]")
    for a in spec.arrays:
        if a.lo > a.hi:
            err("empty-interval", f"input {a.name} has empty interval [{a.lo}, {a.hi}]")
        if a.length <= 0:
            err("array-length", f"input array {a.name} has non-positive length {a.length}")
    for name, size in program.local_arrays:
        if size <= 0:
            err("array-length", f"local array {name} has non-positive size {size}")

    ids = [s.id for s in program.statements]
    idset = set(ids)
    if len(idset) != len(ids):
        err("duplicate-id", "statement ids are not unique")

    for s in program.statements:
        if s.kind not in KINDS:
            err("kind", f"unknown statement kind {s.kind!r}", s.id)
            continue
        if len(s.out) != ARITY[s.kind]:
            code = "branch arity" if s.kind == "branch" else "arity"
            err(code, f"{s.kind} needs {ARITY[s.kind]} successor(s), has {len(s.out)}", s.id)
        if s.kind == "branch" and len(s.out) == 2 and s.out[0] == s.out[1]:
            err("branch arity", "branch successors must be distinct", s.id)
        for nxt in s.out:
            if nxt not in idset:
                err("dangling", f"successor {nxt} does not exist", s.id)
        if s.always_sat and s.kind != "branch":
            err("annotation", "always_sat is only allowed on branches", s.id)

        exprs: list[tuple[Expr, bool]] = []
        if s.kind == "branch":
            if s.expr is None:
                err("missing-expr", "branch without guard", s.id)
            else:
                exprs.append((s.expr, True))
        elif s.kind in ("assign", "add_cost"):
            if s.expr is None:
                err("missing-expr", f"{s.kind} without expression", s.id)
            else:
                exprs.append((s.expr, False))
        if s.kind == "assign":
            if not isinstance(s.target, (Var, Index)):
                err("target", "assign needs a variable or array element target", s.id)
            else:
                exprs.append((s.target, False))
                if isinstance(s.target, Var) and s.target.name in scale:
                    err("target", f"cannot assign scale parameter {s.target.name}", s.id)
        if s.kind == "call" and s.callee not in idset:
            err("callee", f"call target {s.callee} does not exist", s.id)

        for e, want_bool in exprs:
            for msg in type_errors(e, want_bool):
                err("type", msg, s.id)
            for node in walk(e):
                if isinstance(node, Var) and node.name not in scalars:
                    err("undeclared", f"unknown scalar {node.name!r}", s.id)
                elif isinstance(node, Index) and node.array not in arrays:
                    err("undeclared", f"unknown array {node.array!r}", s.id)

    if rep.errors:
        return rep

    reach = reachable(program)
    halts = [s for s in program.statements if s.kind == "halt" and s.id in reach]
    if not halts:
        err("no-exit", "no halt statement is reachable from the entry")
    for s in program.statements:
        if s.id not in reach:
            rep.issues.append(Issue("warning", "unreachable", f"{s.kind} statement is unreachable", s.id))
    return rep
