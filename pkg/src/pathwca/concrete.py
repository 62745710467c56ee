"""Concrete interpreter, execution traces and random inputs."""
from __future__ import annotations

import re
from dataclasses import dataclass, field

import numpy as np

from .errors import BudgetExceeded, ExecutionError, InputError
from .program.model import InputSpec, Program
from .runtime import ASSIGN, BRANCH, CALL, COST, MAX_CALL_DEPTH, RETURN, compiled

DEFAULT_STEP_BUDGET = 10**6


class ConcreteInput:
    """Values for every declared input: ``name -> int`` or ``name -> list[int]``."""

    def __init__(self, spec: InputSpec, values: dict):
        self.spec = spec
        self.values = {k: (list(v) if isinstance(v, (list, tuple, np.ndarray)) else int(v)) for k, v in values.items()}
        self.check()

    def check(self):
        for s in self.spec.scalars:
            if s.name not in self.values:
                raise InputError(f"missing input {s.name}")
            v = self.values[s.name]
            if not isinstance(v, int) or not s.lo <= v <= s.hi:
                raise InputError(f"{s.name}={v!r} outside [{s.lo}, {s.hi}]")
        for a in self.spec.arrays:
            vs = self.values.get(a.name)
            if not isinstance(vs, list) or len(vs) != a.length:
                raise InputError(f"input array {a.name} needs {a.length} elements")
            for k, v in enumerate(vs):
                if not a.lo <= v <= a.hi:
                    raise InputError(f"{a.name}[{k}]={v} outside [{a.lo}, {a.hi}]")
        extra = set(self.values) - {s.name for s in self.spec.scalars} - {a.name for a in self.spec.arrays}
        if extra:
            raise InputError(f"unknown inputs {sorted(extra)}")

    @classmethod
    def from_flat(cls, spec: InputSpec, flat) -> "ConcreteInput":
        flat = [int(x) for x in flat]
        vals, pos = {}, 0
        for s in spec.scalars:
            vals[s.name] = flat[pos]
            pos += 1
        for a in spec.arrays:
            vals[a.name] = flat[pos:pos + a.length]
            pos += a.length
        return cls(spec, vals)

    def flat(self) -> list[int]:
        out = [self.values[s.name] for s in self.spec.scalars]
        for a in self.spec.arrays:
            out.extend(self.values[a.name])
        return out

    def to_text(self) -> str:
        lines = [f"{s.name} = {self.values[s.name]}" for s in self.spec.scalars]
        lines += [f"{a.name} = {' '.join(map(str, self.values[a.name]))}" for a in self.spec.arrays]
        return "\n".join(lines) + ("\n" if lines else "")

    @classmethod
    def from_text(cls, spec: InputSpec, text: str) -> "ConcreteInput":
        arrays = {a.name for a in spec.arrays}
        vals = {}
        for line in text.splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, sep, rhs = line.partition("=")
            if not sep:
                raise InputError(f"expected key = value, got {line!r}")
            key = key.strip()
            nums = [int(x) for x in re.split(r"[\s,\[\]]+", rhs) if x]
            vals[key] = nums if key in arrays else (nums[0] if len(nums) == 1 else nums)
        return cls(spec, vals)

    def __eq__(self, other):
        return isinstance(other, ConcreteInput) and self.spec == other.spec and self.values == other.values

    def __repr__(self):
        return f"ConcreteInput({self.values})"


@dataclass
class Trace:
    program: Program
    input: ConcreteInput
    stmt_ids: list[int]
    # (position in stmt_ids, branch stmt id, took true side)
    branches: list[tuple[int, int, bool]] = field(default_factory=list)
    total_cost: int = 0

    @property
    def steps(self) -> int:
        return len(self.stmt_ids)


def _interpret(cp, R, A, budget, record):
    kind, nxt, tru, callee, fn = cp.kind, cp.next, cp.true, cp.callee, cp.cfn
    pc, cost, steps = 0, 0, 0
    stack: list[int] = []
    path = [] if record else None
    branches = [] if record else None
    while True:
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"concrete run exceeded {budget} steps")
        if record:
            path.append(pc)
        k = kind[pc]
        if k == BRANCH:
            c = fn[pc](R, A, None)
            if record:
                branches.append((steps - 1, cp.ids[pc], bool(c)))
            pc = tru[pc] if c else nxt[pc]
        elif k == ASSIGN:
            fn[pc](R, A, None)
            pc = nxt[pc]
        elif k == COST:
            cost += fn[pc](R, A, None)
            pc = nxt[pc]
        elif k == CALL:
            if len(stack) >= MAX_CALL_DEPTH:
                raise ExecutionError("call depth limit exceeded")
            stack.append(nxt[pc])
            pc = callee[pc]
        elif k == RETURN:
            pc = stack.pop() if stack else nxt[pc]
        else:
            return cost, path, branches


def run_concrete(program: Program, inp: ConcreteInput, step_budget: int = DEFAULT_STEP_BUDGET) -> Trace:
    cp = compiled(program)
    R, A = cp.fresh_state(*cp.split_flat(inp.flat()))
    cost, path, branches = _interpret(cp, R, A, step_budget, True)
    ids = cp.ids
    return Trace(program, inp, [ids[k] for k in path], branches, cost)


def concrete_cost(program: Program, flat, step_budget: int = DEFAULT_STEP_BUDGET) -> int:
    """Cost of a flat input vector without building a trace."""
    cp = compiled(program)
    R, A = cp.fresh_state(*cp.split_flat(flat))
    return _interpret(cp, R, A, step_budget, False)[0]


def extract_path_string(trace: Trace, length: int | None = None) -> str:
    """Bits of the path taken by ``trace`` under the default mapping.

    Branches whose guard is concrete in the symbolic state consume no bit.
    With ``length`` the result is zero-padded (never truncated).
    """
    from .symbolic import guided_bits

    bits, ids = guided_bits(trace.program, trace.input, record=True)
    if ids != trace.stmt_ids:
        raise ExecutionError("symbolic replay diverged from the concrete trace")
    s = "".join("1" if b else "0" for b in bits)
    if length is not None and len(s) < length:
        s += "0" * (length - len(s))
    return s


def random_input(spec: InputSpec, seed=None) -> ConcreteInput:
    rng = seed if isinstance(seed, np.random.Generator) else np.random.default_rng(seed)
    vals = {}
    for s in spec.scalars:
        vals[s.name] = int(rng.integers(s.lo, s.hi + 1))
    for a in spec.arrays:
        vals[a.name] = [int(x) for x in rng.integers(a.lo, a.hi + 1, size=a.length)]
    return ConcreteInput(spec, vals)


def random_flat(spec: InputSpec, rng: np.random.Generator) -> np.ndarray:
    lo = np.array([v[1] for v in spec.variables()], dtype=np.int64)
    hi = np.array([v[2] for v in spec.variables()], dtype=np.int64)
    return rng.integers(lo, hi + 1)
