"""Comparison methods: input-space evolutionary fuzzing and best-first symbolic execution."""
from __future__ import annotations

import heapq
import itertools
import time
from dataclasses import asdict, dataclass

import numpy as np

from .concrete import ConcreteInput, concrete_cost, random_flat, run_concrete
from .errors import BudgetExceeded, ExecutionError, PathTooShort, SolverBudgetExceeded, UnsupportedFeature
from .evo.engine import EvoParams, _stop
from .evo.selection import select_indices
from .program.model import Program
from .report import Curve, RunReport
from .solver import SolverContext, kernel
from .symbolic import Mode, execute, solve_witness

# ---------------------------------------------------------------------------
# input-space fuzzing


@dataclass
class InputIndividual:
    values: np.ndarray
    perf: int


class InputOps:
    """Mutation and crossover on flat input vectors, always clamped to the domain."""

    def __init__(self, program: Program):
        spec = program.input_spec.variables()
        self.lo = np.array([v[1] for v in spec], dtype=np.int64)
        self.hi = np.array([v[2] for v in spec], dtype=np.int64)
        self.n = len(spec)
        # (start, length) of every array in the flat layout, scalars as length 1
        self.blocks = []
        pos = 0
        for _ in program.input_spec.scalars:
            self.blocks.append((pos, 1))
            pos += 1
        for a in program.input_spec.arrays:
            self.blocks.append((pos, a.length))
            pos += a.length

    def mutate(self, x: np.ndarray, rng) -> np.ndarray:
        y = x.copy()
        if self.n == 0:
            return y
        k = int(rng.integers(self.n))
        if rng.random() < 0.5:
            y[k] = rng.integers(self.lo[k], self.hi[k] + 1)
        else:
            y[k] = min(max(y[k] + (1 if rng.random() < 0.5 else -1), self.lo[k]), self.hi[k])
        return y

    def crossover(self, a: np.ndarray, b: np.ndarray, rng) -> np.ndarray:
        """Prefix of one parent's block spliced onto the other's suffix."""
        y = a.copy()
        if self.n == 0:
            return y
        start, length = self.blocks[int(rng.integers(len(self.blocks)))]
        cut = start + int(rng.integers(0, length + 1))
        y[cut:start + length] = b[cut:start + length]
        # later blocks come from the second parent as well
        y[start + length:] = b[start + length:]
        return y


def _safe_cost(program, x, step_budget):
    try:
        return concrete_cost(program, [int(v) for v in x], step_budget)
    except (BudgetExceeded, ExecutionError):
        return -1


def fuzz_inputs(program: Program, params: EvoParams | None = None, label: str | None = None,
                scale: dict | None = None) -> RunReport:
    """The evolutionary loop run directly on concrete inputs."""
    params = (params or EvoParams()).validate()
    rng = np.random.default_rng(params.seed)
    ops = InputOps(program)
    _, hamming = kernel.crowding_functions()
    curve = Curve()
    t0 = time.perf_counter()
    evals = 0
    errors = 0

    def evaluate(x):
        nonlocal evals, errors
        evals += 1
        c = _safe_cost(program, x, params.step_budget)
        errors += c < 0
        return InputIndividual(x, c)

    pop = [evaluate(random_flat(program.input_spec, rng)) for _ in range(params.psize)]
    best = max(pop, key=lambda t: t.perf)
    curve.update(best.perf, evals)
    gen = 0
    while not _stop(params, best.perf, t0, gen):
        kids = []
        for _ in range(params.n_offspring):
            if rng.random() < params.mutation_share:
                kids.append(ops.mutate(pop[int(rng.integers(len(pop)))].values, rng))
            else:
                a = int(rng.integers(len(pop)))
                b = int(rng.integers(len(pop) - 1))
                b += b >= a
                kids.append(ops.crossover(pop[a].values, pop[b].values, rng))
        kids = [evaluate(x) for x in kids]
        vals = np.stack([k.values for k in kids]) if ops.n else np.zeros((len(kids), 0), dtype=np.int64)
        crowd = hamming(vals)
        kp, ko = select_indices([p.perf for p in pop], [k.perf for k in kids], crowd, params.psize,
                                params.r1, params.r2, params.beta, params.gamma, rng)
        pop = [pop[k] for k in kp] + [kids[k] for k in ko]
        gen += 1
        top = max(kids, key=lambda t: t.perf)
        if top.perf > best.perf:
            best = top
        curve.update(best.perf, evals)
    curve.close(best.perf, evals)
    inp = ConcreteInput.from_flat(program.input_spec, best.values) if best.perf >= 0 else None
    wall = time.perf_counter() - t0
    return RunReport(
        method="fuzz",
        program=label or program.name,
        scale=dict(scale if scale is not None else program.scale),
        params=asdict(params),
        best_cost=best.perf,
        best_input=inp.values if inp else None,
        curve=curve.points,
        sat_rate=(evals - errors) / evals if evals else 0.0,
        evals=evals,
        generations=gen,
        errors=errors,
        seed=params.seed,
        workers=1,
        wall_time=wall,
        time_to_best_ms=curve.time_to_best(),
    )


# ---------------------------------------------------------------------------
# best-first symbolic execution


@dataclass
class PrefixState:
    """An open path: the bits chosen at every two-way feasible branch so far."""

    bits: tuple
    cost: int
    depth: int


@dataclass
class SymexeParams:
    budget_seconds: float = 60.0
    frontier_cap: int = 100_000
    max_expansions: int | None = None
    target_cost: int | None = None
    step_budget: int = 10**6


def _expand(program, bits, ctx, step_budget):
    """('done', outcome) for a complete path, ('open', cost) at the next free branch."""
    try:
        return "done", execute(program, list(bits), Mode.SKIP_UNSAT, ctx, step_budget)
    except PathTooShort as e:
        return "open", e.cost


def symexe_search(program: Program, params: SymexeParams | None = None, label: str | None = None,
                  scale: dict | None = None) -> RunReport:
    """Best-first enumeration of feasible paths, most expensive prefix first.

    Forced branches (one side infeasible) are followed without branching, so
    every frontier state is feasible. Ties prefer deeper states, then older ones.
    """
    params = params or SymexeParams()
    ctx = SolverContext(program.input_spec)
    curve = Curve()
    t0 = time.perf_counter()
    order = itertools.count()
    frontier: list = []
    best_cost, best_bits, best_outcome = -1, None, None
    expansions = completed = dropped = errors = 0

    def push(st: PrefixState):
        heapq.heappush(frontier, (-st.cost, -st.depth, next(order), st))

    push(PrefixState((), 0, 0))
    exhausted = False
    while True:
        if not frontier:
            exhausted = True
            break
        if time.perf_counter() - t0 >= params.budget_seconds:
            break
        if params.max_expansions is not None and expansions >= params.max_expansions:
            break
        if params.target_cost is not None and best_cost >= params.target_cost:
            break
        _, _, _, st = heapq.heappop(frontier)
        expansions += 1
        try:
            kind, res = _expand(program, st.bits, ctx, params.step_budget)
        except (BudgetExceeded, ExecutionError, UnsupportedFeature, SolverBudgetExceeded):
            errors += 1
            continue
        if kind == "done":
            if res.budget_exceeded:
                errors += 1
                continue
            completed += 1
            if res.cost > best_cost:
                best_cost, best_bits, best_outcome = res.cost, st.bits, res
        else:
            for b in (1, 0):
                push(PrefixState(st.bits + (b,), res, st.depth + 1))
            if len(frontier) > params.frontier_cap * 1.1:
                keep = heapq.nsmallest(params.frontier_cap, frontier)
                dropped += len(frontier) - len(keep)
                frontier = keep
                heapq.heapify(frontier)
        curve.update(best_cost, expansions)
    curve.close(best_cost, expansions)
    best_input = None
    # a trimmed frontier means the enumeration was not complete
    notes = {"exhausted": exhausted and dropped == 0, "completed_paths": completed, "dropped": dropped,
             "frontier": len(frontier)}
    if best_outcome is not None:
        inp = solve_witness(program, best_outcome, ctx)
        best_input = inp.values
        notes["witness_cost"] = run_concrete(program, inp).total_cost
    wall = time.perf_counter() - t0
    sd = ctx.stats.as_dict()
    return RunReport(
        method="symexe",
        program=label or program.name,
        scale=dict(scale if scale is not None else program.scale),
        params=asdict(params),
        best_cost=best_cost,
        best_input=best_input,
        best_path="".join(map(str, best_bits)) if best_bits is not None else None,
        curve=curve.points,
        solver=sd,
        sat_rate=1.0,
        evals=expansions,
        errors=errors,
        workers=1,
        wall_time=wall,
        time_to_best_ms=curve.time_to_best(),
        solver_time_share=min(1.0, sd["solve_time"] / wall) if wall > 0 else 0.0,
        notes=notes,
    )
