"""Path-string driven symbolic execution."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .concrete import ConcreteInput, random_input, run_concrete
from .errors import (
    BudgetExceeded, ExecutionError, IllegalState, PathTooShort, SolverBudgetExceeded,
)
from .program.model import Program
from .runtime import ASSIGN, BRANCH, CALL, COST, MAX_CALL_DEPTH, RETURN, compiled
from .solver import SolverContext
from .solver.linear import Lin, holds, negate

DEFAULT_STEP_BUDGET = 10**6


class Mode(enum.Enum):
    DEFAULT = "default"
    SKIP_UNSAT = "skip-unsat"

    @classmethod
    def parse(cls, x) -> "Mode":
        if isinstance(x, cls):
            return x
        return cls(str(x).lower().replace("_", "-"))


@dataclass
class PathOutcome:
    sat: bool
    cost: int
    m: int
    conditions: list = field(default_factory=list)
    trace_len: int = 0
    solver_calls: int = 0
    # (Lin, divisor) pairs introduced by // and %, in creation order
    aux: list = field(default_factory=list)
    budget_exceeded: bool = False
    # branch statement ids where SKIP_UNSAT found only one side satisfiable
    forced: list = field(default_factory=list)

    def to_json(self) -> dict:
        return {"sat": self.sat, "cost": self.cost, "m": self.m, "solver_calls": self.solver_calls}


class SymEnv:
    """Per-run symbolic environment: memoized div/mod variables."""

    def __init__(self, ctx: SolverContext | None, model: list | None, first_var: int):
        self.ctx = ctx
        self.model = model
        self.memo: dict = {}
        self.aux: list = []
        self.next_var = first_var

    def divmod(self, lin: Lin, c: int):
        key = (lin.key(), c)
        hit = self.memo.get(key)
        if hit is not None:
            return hit
        if self.ctx is not None:
            q, r = self.ctx.define_divmod(lin, c)
        else:
            q, r = self.next_var, self.next_var + 1
            self.next_var += 2
        if self.model is not None:
            x = lin.value(self.model)
            self.model.append(x // c)
            self.model.append(x % c)
        self.aux.append((lin, c))
        self.memo[key] = (q, r)
        return q, r


def _initial_state(cp):
    t = cp.program._cache.get("sym_template")
    if t is None:
        vid = 0
        scal = []
        for _ in range(cp.n_input_scalars):
            scal.append(Lin.var(vid))
            vid += 1
        arrs = []
        for k in range(cp.n_input_arrays):
            arrs.append([Lin.var(vid + j) for j in range(cp.array_lengths[k])])
            vid += cp.array_lengths[k]
        t = (scal, arrs)
        cp.program._cache["sym_template"] = t
    return cp.fresh_state(*t)


def _walk(cp, env, decide, budget, record=False):
    """Walk the program symbolically; ``decide(pc, cond)`` resolves open branches."""
    kind, nxt, tru, callee, fn = cp.kind, cp.next, cp.true, cp.callee, cp.sfn
    R, A = _initial_state(cp)
    pc, cost, steps = 0, 0, 0
    stack: list[int] = []
    path = [] if record else None
    while True:
        steps += 1
        if steps > budget:
            raise BudgetExceeded(f"symbolic run exceeded {budget} steps")
        if record:
            path.append(cp.ids[pc])
        k = kind[pc]
        if k == BRANCH:
            c = fn[pc](R, A, env)
            if c is True:
                pc = tru[pc]
            elif c is False:
                pc = nxt[pc]
            else:
                try:
                    pc = tru[pc] if decide(pc, c) else nxt[pc]
                except PathTooShort as e:
                    # callers exploring prefixes want the cost so far
                    e.cost, e.pc = cost, pc
                    raise
        elif k == ASSIGN:
            fn[pc](R, A, env)
            pc = nxt[pc]
        elif k == COST:
            v = fn[pc](R, A, env)
            if type(v) is not int:
                from .errors import UnsupportedFeature

                raise UnsupportedFeature("input-dependent cost expression")
            cost += v
            pc = nxt[pc]
        elif k == CALL:
            if len(stack) >= MAX_CALL_DEPTH:
                raise ExecutionError("call depth limit exceeded")
            stack.append(nxt[pc])
            pc = callee[pc]
        elif k == RETURN:
            pc = stack.pop() if stack else nxt[pc]
        else:
            return cost, steps, path


def _bits_of(q):
    if isinstance(q, str):
        return [1 if ch == "1" else 0 for ch in q if ch in "01"]
    return q


def execute(program: Program, q, mode=Mode.DEFAULT, ctx: SolverContext | None = None,
            step_budget: int = DEFAULT_STEP_BUDGET) -> PathOutcome:
    """Run ``program`` driven by path string ``q``.

    ``ctx`` is reset before use; passing the same context across calls keeps
    its pool of satisfying models warm.
    """
    mode = Mode.parse(mode)
    cp = compiled(program)
    bits = _bits_of(q)
    nbits = len(bits)
    if ctx is None:
        ctx = SolverContext(program.input_spec)
    else:
        ctx.reset()
    calls0 = ctx.stats.sat_calls
    env = SymEnv(ctx, None, cp.n_inputs)
    conds: list = []
    forced: list = []
    used = [0]
    open_checked = [False]
    always = cp.always_sat

    def take_bit():
        i = used[0]
        if i >= nbits:
            raise PathTooShort(f"path string of length {nbits} exhausted")
        used[0] = i + 1
        return bits[i]

    if mode is Mode.DEFAULT:
        def decide(pc, c):
            b = take_bit()
            conds.append(c if b else negate(c))
            if not always[pc]:
                open_checked[0] = True
            return bool(b)
    else:
        def decide(pc, c):
            i = used[0]
            if always[pc]:
                b = take_bit()
                want = c if b else negate(c)
                ctx.push(want)
                conds.append(want)
                return bool(b)
            # a forced branch needs no bit, so running out is only fatal later
            b = bits[i] if i < nbits else 1
            want = c if b else negate(c)
            other = negate(want)
            ok1, m1 = ctx.check_with(want)
            if ok1:
                ok2, _ = ctx.check_with(other)
                if ok2:
                    take_bit()
                else:
                    forced.append(cp.ids[pc])
                ctx.push(want, hint=m1)
                conds.append(want)
                return bool(b)
            ok2, m2 = ctx.check_with(other)
            if not ok2:
                raise IllegalState("both branch polarities unsatisfiable on a satisfiable prefix")
            forced.append(cp.ids[pc])
            ctx.push(other, hint=m2)
            conds.append(other)
            return not b

    try:
        cost, steps, _ = _walk(cp, env, decide, step_budget)
        sat = True
        if mode is Mode.DEFAULT and open_checked[0]:
            for c in conds:
                ctx.push(c)
            sat = bool(ctx.check_sat())
    except SolverBudgetExceeded:
        return PathOutcome(False, 0, used[0], conds, 0, ctx.stats.sat_calls - calls0, env.aux, True, forced)
    return PathOutcome(sat, cost, used[0], conds, steps, ctx.stats.sat_calls - calls0, env.aux, False, forced)


def witness_context(program: Program, outcome: PathOutcome, budget=None) -> SolverContext:
    ctx = SolverContext(program.input_spec, **({"budget": budget} if budget else {}))
    for lin, c in outcome.aux:
        ctx.define_divmod(lin, c)
    for cond in outcome.conditions:
        ctx.push(cond)
    return ctx


def solve_witness(program: Program, outcome: PathOutcome, ctx: SolverContext | None = None) -> ConcreteInput:
    """A concrete input following the outcome's path; free inputs at lower bounds."""
    if not outcome.sat:
        raise IllegalState("no witness for an unsatisfiable path")
    wctx = witness_context(program, outcome)
    if not wctx.check_sat():
        raise IllegalState("path conditions are unsatisfiable")
    model = wctx.get_model()
    flat = [model[name] for name, _, _ in program.input_spec.variables()]
    if ctx is not None:
        ctx.stats.merge(wctx.stats)
    return ConcreteInput.from_flat(program.input_spec, flat)


def guided_bits(program: Program, inp: ConcreteInput, mode=Mode.DEFAULT, ctx: SolverContext | None = None,
                record: bool = False, step_budget: int = DEFAULT_STEP_BUDGET):
    """Path string related to a concrete input under ``mode``.

    Under the default mapping every symbolic branch yields a bit. Under
    SKIP_UNSAT a branch yields a bit only when both sides are satisfiable.
    Returns ``(bits, stmt_ids or None)``.
    """
    mode = Mode.parse(mode)
    cp = compiled(program)
    model = list(inp.flat())
    bits: list[int] = []
    always = cp.always_sat
    if mode is Mode.DEFAULT:
        env = SymEnv(None, model, cp.n_inputs)

        def decide(pc, c):
            t = holds(c, model)
            bits.append(1 if t else 0)
            return t
    else:
        if ctx is None:
            ctx = SolverContext(program.input_spec)
        else:
            ctx.reset()
        env = SymEnv(ctx, model, cp.n_inputs)

        def decide(pc, c):
            t = holds(c, model)
            side = c if t else negate(c)
            if always[pc]:
                bits.append(1 if t else 0)
            else:
                ok, _ = ctx.check_with(negate(side))
                if ok:
                    bits.append(1 if t else 0)
            ctx.push(side, hint=model)
            return t

    _, _, path = _walk(cp, env, decide, step_budget, record)
    return bits, path


def related_path_string(program: Program, inp: ConcreteInput, M: int, mode=Mode.DEFAULT,
                        ctx: SolverContext | None = None) -> np.ndarray:
    bits, _ = guided_bits(program, inp, mode, ctx)
    if len(bits) > M:
        raise PathTooShort(f"input needs {len(bits)} bits, path length is {M}")
    out = np.zeros(M, dtype=np.uint8)
    out[:len(bits)] = bits
    return out


def estimate_M(program: Program, samples: int = 100, margin: float = 2.0, seed=0) -> int:
    """ceil(margin * longest default-mapping string over random inputs), at least 1."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    rng = np.random.default_rng(seed)
    longest = 0
    for _ in range(samples):
        bits, _ = guided_bits(program, random_input(program.input_spec, rng))
        longest = max(longest, len(bits))
    return max(1, math.ceil(margin * longest))


def enumerate_paths(program: Program, limit: int = 1 << 16, ctx: SolverContext | None = None,
                    step_budget: int = DEFAULT_STEP_BUDGET):
    """All satisfiable paths as (bits, PathOutcome), by depth-first SKIP_UNSAT expansion.

    Raises BudgetExceeded when more than ``limit`` paths exist.
    """
    ctx = ctx or SolverContext(program.input_spec)
    out = []
    todo = [[]]
    while todo:
        prefix = todo.pop()
        try:
            o = execute(program, prefix, Mode.SKIP_UNSAT, ctx, step_budget)
        except PathTooShort:
            todo.append(prefix + [1])
            todo.append(prefix + [0])
            continue
        out.append((prefix, o))
        if len(out) > limit:
            raise BudgetExceeded(f"more than {limit} paths")
    return out
