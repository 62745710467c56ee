"""Line-oriented text format for programs.

Header lines (any order, before the first statement)::

    program quicksort
    scale N = 8
    input X in [-5, 5]
    input A[N] in [1, N]
    local i j pivot
    local_array buf[N]

Statement lines::

    id kind [payload] -> succ[, succ] [@always_sat]

where payload is a guard (``branch``), a value (``add_cost``), ``target = value``
(``assign``) or a callee id (``call``). ``halt`` has no arrow. Branch
successors are listed false-side first. ``#`` starts a comment.
"""
from __future__ import annotations

import re

from ..errors import ProgramError
from .expr import BinOp, Const, Index, Var, parse_expr, to_text
from .model import ArrayInput, InputSpec, Program, ScalarInput, Statement


def _const_eval(text: str, scale: dict[str, int]) -> int:
    e = parse_expr(text)

    def ev(x):
        if isinstance(x, Const):
            return x.value
        if isinstance(x, Var):
            if x.name not in scale:
                raise ProgramError(f"unknown scale parameter {x.name!r}")
            return scale[x.name]
        if isinstance(x, BinOp):
            a, b = ev(x.left), ev(x.right)
            if x.op == "+":
                return a + b
            if x.op == "-":
                return a - b
            if x.op == "*":
                return a * b
            if x.op == "//":
                return a // b
            return a % b
        raise ProgramError(f"not a constant expression: {text!r}")

    return ev(e)


_INPUT_RE = re.compile(r"^input\s+([A-Za-z_]\w*)\s*(?:\[(.+?)\])?\s+in\s+\[(.+),(.+)\]$")
_ARRAY_DECL_RE = re.compile(r"([A-Za-z_]\w*)\s*\[(.+?)\]")
_STMT_RE = re.compile(r"^(-?\d+)\s+(\w+)\s*(.*?)\s*(?:->\s*([-\d,\s]+?))?\s*(@always_sat)?$")


def parse_program(text: str) -> Program:
    name = None
    scale: dict[str, int] = {}
    scalars: list[ScalarInput] = []
    arrays: list[ArrayInput] = []
    local_scalars: list[str] = []
    local_arrays: list[tuple[str, int]] = []
    stmts: list[Statement] = []

    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            head = line.split(None, 1)[0]
            if head == "program":
                name = line.split(None, 1)[1].strip()
            elif head == "scale":
                key, _, val = line[len("scale"):].partition("=")
                scale[key.strip()] = _const_eval(val.strip(), scale)
            elif head == "input":
                m = _INPUT_RE.match(line)
                if not m:
                    raise ProgramError(f"bad input declaration {line!r}")
                nm, length, lo, hi = m.groups()
                lo_v, hi_v = _const_eval(lo.strip(), scale), _const_eval(hi.strip(), scale)
                if length is None:
                    scalars.append(ScalarInput(nm, lo_v, hi_v))
                else:
                    arrays.append(ArrayInput(nm, _const_eval(length, scale), lo_v, hi_v))
            elif head == "local":
                local_scalars.extend(line.split()[1:])
            elif head == "local_array":
                for nm, size in _ARRAY_DECL_RE.findall(line[len("local_array"):]):
                    local_arrays.append((nm, _const_eval(size, scale)))
            else:
                stmts.append(_parse_statement(line))
        except ProgramError as exc:
            raise ProgramError(f"line {lineno}: {exc}") from None

    if name is None:
        raise ProgramError("missing 'program <name>' header")
    return Program(
        name=name,
        statements=tuple(stmts),
        input_spec=InputSpec(tuple(scalars), tuple(arrays)),
        scale_params=tuple(scale.items()),
        local_scalars=tuple(local_scalars),
        local_arrays=tuple(local_arrays),
    )


def _parse_statement(line: str) -> Statement:
    m = _STMT_RE.match(line)
    if not m:
        raise ProgramError(f"bad statement {line!r}")
    sid, kind, payload, outs, ann = m.groups()
    out = tuple(int(x) for x in outs.split(",")) if outs else ()
    sid = int(sid)
    always = ann is not None
    if kind == "halt":
        return Statement(sid, kind, out=out, always_sat=always)
    if kind == "return":
        return Statement(sid, kind, out=out, always_sat=always)
    if kind == "call":
        return Statement(sid, kind, out=out, callee=int(payload), always_sat=always)
    if kind == "assign":
        lhs, sep, rhs = payload.partition("=")
        if not sep or rhs.startswith("="):
            raise ProgramError(f"assign needs 'target = value': {line!r}")
        target = parse_expr(lhs.strip())
        if not isinstance(target, (Var, Index)):
            raise ProgramError(f"bad assignment target {lhs!r}")
        return Statement(sid, kind, expr=parse_expr(rhs.strip()), out=out, target=target, always_sat=always)
    if kind in ("branch", "add_cost"):
        return Statement(sid, kind, expr=parse_expr(payload), out=out, always_sat=always)
    raise ProgramError(f"unknown statement kind {kind!r}")


def format_statement(s: Statement) -> str:
    parts = [str(s.id), s.kind]
    if s.kind == "assign":
        parts.append(f"{to_text(s.target)} = {to_text(s.expr)}")
    elif s.kind in ("branch", "add_cost"):
        parts.append(to_text(s.expr))
    elif s.kind == "call":
        parts.append(str(s.callee))
    if s.out:
        parts.append("-> " + ", ".join(map(str, s.out)))
    if s.always_sat:
        parts.append("@always_sat")
    return " ".join(parts)


def format_program(p: Program) -> str:
    lines = [f"program {p.name}"]
    lines += [f"scale {k} = {v}" for k, v in p.scale_params]
    lines += [f"input {s.name} in [{s.lo}, {s.hi}]" for s in p.input_spec.scalars]
    lines += [f"input {a.name}[{a.length}] in [{a.lo}, {a.hi}]" for a in p.input_spec.arrays]
    if p.local_scalars:
        lines.append("local " + " ".join(p.local_scalars))
    if p.local_arrays:
        lines.append("local_array " + " ".join(f"{n}[{k}]" for n, k in p.local_arrays))
    lines += [format_statement(s) for s in p.statements]
    return "\n".join(lines) + "\n"
