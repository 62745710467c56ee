"""Evolutionary search over path strings."""
from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from ..concrete import random_input, run_concrete
from ..errors import (
    BudgetExceeded, ConfigError, ExecutionError, IllegalState, PathTooShort, UnsupportedFeature,
)
from ..program.model import Program
from ..report import Curve, RunReport
from ..solver import SolverContext, SolverStats
from ..symbolic import Mode, estimate_M, execute, related_path_string, solve_witness
from .operators import crossover, mutate, to_str
from .selection import crowdingness, select_indices

RECOVERABLE = (PathTooShort, BudgetExceeded, ExecutionError, UnsupportedFeature, IllegalState)


@dataclass
class Individual:
    q: np.ndarray
    perf: int
    m: int
    origin: str = "random"
    crowd: float = 0.0
    error: str | None = None
    budget_exceeded: bool = False

    @property
    def sat(self) -> bool:
        return self.perf >= 0

    def bits(self) -> str:
        return to_str(self.q, self.m)


@dataclass
class EvoParams:
    psize: int = 50
    r1: float = 0.2
    r2: float = 0.4
    beta: float = 1.0
    gamma: float = 0.5
    M: int | None = None
    offspring: int | None = None
    mutation_share: float = 0.5
    max_iters: int | None = None
    budget_seconds: float = 60.0
    seed: int = 0
    workers: int = 1
    mode: str = "skip-unsat"
    estimate_samples: int = 100
    estimate_margin: float = 2.0
    target_cost: int | None = None
    step_budget: int = 10**6

    def validate(self) -> "EvoParams":
        if self.psize < 2:
            raise ConfigError("psize must be at least 2")
        for name in ("r1", "r2", "mutation_share"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ConfigError(f"{name} must lie in [0, 1], got {v}")
        if self.r1 + self.r2 > 1.0 + 1e-12:
            raise ConfigError("r1 + r2 must not exceed 1")
        if self.beta <= 0 or self.gamma <= 0:
            raise ConfigError("beta and gamma must be positive")
        if self.offspring is not None and self.offspring < 1:
            raise ConfigError("offspring count must be at least 1")
        if self.M is not None and self.M < 1:
            raise ConfigError("path length M must be at least 1")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if self.max_iters is not None and self.max_iters < 0:
            raise ConfigError("max_iters must be non-negative")
        try:
            Mode.parse(self.mode)
        except ValueError:
            raise ConfigError(f"unknown mapping {self.mode!r}") from None
        return self

    @property
    def n_offspring(self) -> int:
        return self.offspring or self.psize

    @classmethod
    def from_mapping(cls, d: dict) -> "EvoParams":
        """Build from string or typed values, e.g. a parsed key = value file."""
        types = {f.name: f.type for f in fields(cls)}
        kw = {}
        for k, v in d.items():
            key = k.replace("-", "_")
            if key == "path_len":
                key = "M"
            if key not in types:
                raise ConfigError(f"unknown parameter {k!r}")
            kw[key] = _coerce(types[key], v, k)
        return cls(**kw).validate()


def _coerce(tp, v, name):
    if v is None or not isinstance(v, str):
        return v
    if v.strip().lower() in ("none", ""):
        return None
    base = str(tp).replace(" | None", "")
    try:
        if base == "int":
            return int(v)
        if base == "float":
            return float(v)
    except ValueError:
        raise ConfigError(f"bad value for {name}: {v!r}") from None
    return v


@dataclass
class Population:
    generation: int
    individuals: list
    best_ever: Individual

    @property
    def best(self) -> Individual:
        return max(self.individuals, key=lambda x: x.perf)


class Evaluator:
    """Symbolic evaluation of path strings with a private solver context."""

    def __init__(self, program: Program, mode, step_budget: int = 10**6):
        self.program = program
        self.mode = Mode.parse(mode)
        self.step_budget = step_budget
        self.ctx = SolverContext(program.input_spec)
        self.evals = 0
        self.sat = 0
        self.errors = 0
        self.budget_exceeded = 0
        self.first_errors: list[str] = []

    def evaluate(self, q, origin="random") -> Individual:
        self.evals += 1
        try:
            o = execute(self.program, q, self.mode, self.ctx, self.step_budget)
        except RECOVERABLE as e:
            self.errors += 1
            msg = f"{type(e).__name__}: {e}"
            if len(self.first_errors) < 5:
                self.first_errors.append(msg)
            return Individual(q, -1, len(q), origin, error=msg)
        if o.budget_exceeded:
            self.budget_exceeded += 1
        if o.sat:
            self.sat += 1
        return Individual(q, o.cost if o.sat else -1, o.m, origin, budget_exceeded=o.budget_exceeded)

    def counters(self) -> dict:
        return {"evals": self.evals, "sat": self.sat, "errors": self.errors,
                "budget_exceeded": self.budget_exceeded}


# per-process state for parallel evaluation
_WORKER: Evaluator | None = None


def _init_worker(program_text, mode, step_budget):
    global _WORKER
    from ..program.text import parse_program

    _WORKER = Evaluator(parse_program(program_text), mode, step_budget)


def _eval_batch(batch):
    before = _WORKER.counters()
    stats0 = SolverStats(**_WORKER.ctx.stats.as_dict())
    out = []
    for q, origin in batch:
        ind = _WORKER.evaluate(q, origin)
        out.append((ind.perf, ind.m, ind.error, ind.budget_exceeded))
    after = _WORKER.counters()
    delta = {k: after[k] - before[k] for k in after}
    s = _WORKER.ctx.stats.as_dict()
    sdelta = {k: s[k] - v for k, v in stats0.as_dict().items()}
    return out, delta, sdelta, list(_WORKER.first_errors)


class ParallelEvaluator:
    """Evaluator facade fanning a generation out to worker processes."""

    def __init__(self, program: Program, mode, step_budget: int, workers: int):
        from ..program.text import format_program

        self.local = Evaluator(program, mode, step_budget)
        self.workers = workers
        self.pool = ProcessPoolExecutor(
            max_workers=workers, initializer=_init_worker,
            initargs=(format_program(program), Mode.parse(mode).value, step_budget),
        )
        self.stats = SolverStats()

    @property
    def ctx(self):
        return self.local.ctx

    @property
    def mode(self):
        return self.local.mode

    def evaluate(self, q, origin="random") -> Individual:
        return self.local.evaluate(q, origin)

    def evaluate_many(self, items) -> list[Individual]:
        chunks = [items[k::self.workers] for k in range(self.workers)]
        results = list(self.pool.map(_eval_batch, chunks))
        out = [None] * len(items)
        for w, (res, delta, sdelta, errs) in enumerate(results):
            for pos, (perf, m, err, bex) in enumerate(res):
                k = w + pos * self.workers
                q, origin = items[k]
                out[k] = Individual(q, perf, m, origin, error=err, budget_exceeded=bex)
            for key, v in delta.items():
                setattr(self.local, key, getattr(self.local, key) + v)
            self.stats.merge(SolverStats(**sdelta))
            for e in errs:
                if len(self.local.first_errors) < 5 and e not in self.local.first_errors:
                    self.local.first_errors.append(e)
        return out

    def counters(self):
        return self.local.counters()

    def close(self):
        self.pool.shutdown()


def init_population(program: Program, params: EvoParams, evaluator, rng: np.random.Generator, M: int) -> Population:
    """ceil(psize/2) uniform random strings and floor(psize/2) seeded from random inputs."""
    n_random = math.ceil(params.psize / 2)
    n_seeded = params.psize // 2
    inds = []
    for _ in range(n_random):
        inds.append(evaluator.evaluate(rng.integers(0, 2, M, dtype=np.uint8), "random"))
    for _ in range(n_seeded):
        inp = random_input(program.input_spec, rng)
        try:
            q = related_path_string(program, inp, M, evaluator.mode, evaluator.ctx)
        except PathTooShort as e:
            raise PathTooShort(f"{e}; raise the path length (M={M})") from None
        inds.append(evaluator.evaluate(q, "seeded"))
    best = max(inds, key=lambda x: x.perf)
    return Population(0, inds, best)


def make_offspring(pop: Population, params: EvoParams, rng: np.random.Generator) -> list:
    """(bits, origin) pairs; parents drawn uniformly from the population."""
    inds = pop.individuals
    n = len(inds)
    out = []
    for _ in range(params.n_offspring):
        if rng.random() < params.mutation_share:
            p = inds[int(rng.integers(n))]
            kind = "A" if rng.random() < 0.5 else "B"
            out.append((mutate(p.q, p.m, kind, rng), "mutation"))
        else:
            a = int(rng.integers(n))
            b = int(rng.integers(n - 1))
            b += b >= a
            kind = "ABC"[int(rng.integers(3))]
            out.append((crossover(inds[a].q, inds[a].m, inds[b].q, inds[b].m, kind, rng), "crossover"))
    return out


def select_next(prev: Population, offspring: list, params: EvoParams, rng: np.random.Generator) -> Population:
    if not offspring:
        raise ValueError("select_next needs at least one offspring")
    bits = np.stack([o.q for o in offspring])
    crowd = crowdingness(bits, [o.m for o in offspring])
    for o, c in zip(offspring, crowd):
        o.crowd = float(c)
    kp, ko = select_indices(
        [x.perf for x in prev.individuals], [o.perf for o in offspring], crowd,
        params.psize, params.r1, params.r2, params.beta, params.gamma, rng,
    )
    inds = [prev.individuals[k] for k in kp] + [offspring[k] for k in ko]
    best = max([prev.best_ever, *offspring], key=lambda x: x.perf)
    return Population(prev.generation + 1, inds, best)


def _stop(params, best, t0, gen):
    if params.target_cost is not None and best >= params.target_cost:
        return True
    if params.max_iters is not None and gen >= params.max_iters:
        return True
    return time.perf_counter() - t0 >= params.budget_seconds


def run(program: Program, params: EvoParams | None = None, mode=None, label: str | None = None,
        scale: dict | None = None) -> RunReport:
    """Evolve path strings until the time budget, the iteration cap or the target cost."""
    params = (params or EvoParams()).validate()
    if mode is not None:
        params.mode = Mode.parse(mode).value
    mode = Mode.parse(params.mode)
    rng = np.random.default_rng(params.seed)
    curve = Curve()
    t0 = time.perf_counter()
    M = params.M or estimate_M(program, params.estimate_samples, params.estimate_margin, params.seed)
    if params.workers > 1:
        ev = ParallelEvaluator(program, mode, params.step_budget, params.workers)
    else:
        ev = Evaluator(program, mode, params.step_budget)
    try:
        pop = init_population(program, params, ev, rng, M)
        curve.update(pop.best_ever.perf, ev.counters()["evals"])
        while not _stop(params, pop.best_ever.perf, t0, pop.generation):
            items = make_offspring(pop, params, rng)
            if params.workers > 1:
                kids = ev.evaluate_many(items)
            else:
                kids = []
                for q, origin in items:
                    kids.append(ev.evaluate(q, origin))
                    if time.perf_counter() - t0 >= params.budget_seconds:
                        break
            best_kid = max(kids, key=lambda x: x.perf)
            if len(kids) < len(items):
                # budget ran out mid-generation: keep the best, skip selection
                if best_kid.perf > pop.best_ever.perf:
                    pop.best_ever = best_kid
                curve.update(pop.best_ever.perf, ev.counters()["evals"])
                break
            pop = select_next(pop, kids, params, rng)
            curve.update(pop.best_ever.perf, ev.counters()["evals"])
        stats = SolverStats(**ev.ctx.stats.as_dict())
        if params.workers > 1:
            stats.merge(ev.stats)
    finally:
        if params.workers > 1:
            ev.close()
    best = pop.best_ever
    counters = ev.counters()
    curve.close(best.perf, counters["evals"])
    wall = time.perf_counter() - t0
    notes = {"M": M, "mode": mode.value, "first_errors": ev.local.first_errors if params.workers > 1 else ev.first_errors}
    best_input = None
    if best.sat:
        wctx = SolverContext(program.input_spec)
        o = execute(program, best.q, mode, wctx, params.step_budget)
        inp = solve_witness(program, o, wctx)
        best_input = inp.values
        notes["witness_cost"] = run_concrete(program, inp).total_cost
    sd = stats.as_dict()
    return RunReport(
        method="pathfuzz",
        program=label or program.name,
        scale=dict(scale if scale is not None else program.scale),
        params={**asdict(params), "M": M},
        best_cost=best.perf,
        best_input=best_input,
        best_path=best.bits(),
        curve=curve.points,
        solver=sd,
        sat_rate=counters["sat"] / counters["evals"] if counters["evals"] else 0.0,
        evals=counters["evals"],
        generations=pop.generation,
        errors=counters["errors"],
        solver_budget_exceeded=counters["budget_exceeded"],
        seed=params.seed,
        workers=params.workers,
        wall_time=wall,
        time_to_best_ms=curve.time_to_best(),
        solver_time_share=min(1.0, sd.get("solve_time", 0.0) / wall) if wall > 0 else 0.0,
        notes=notes,
    )
