"""Incremental solver context over bounded integer variables."""
from __future__ import annotations

import time
from dataclasses import asdict, dataclass

import numpy as np

from ..errors import IllegalState, SolverBudgetExceeded, StackUnderflow
from . import kernel
from .linear import EQ, LE, Atom, Conj, Disj, Lin, cond_vars, holds, make_atom, negate, split

DEFAULT_BUDGET = 10**7
# depth-first steps tried before switching to relaxation-pruned branch and bound
PROBE_STEPS = 200


class Result:
    """Outcome of :meth:`SolverContext.check_sat`; truthy iff SAT."""

    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __bool__(self):
        return self.name == "sat"

    def __repr__(self):
        return self.name.upper()


SAT = Result("sat")
UNSAT = Result("unsat")


@dataclass
class SolverStats:
    sat_calls: int = 0
    unsat_results: int = 0
    searches: int = 0
    cache_hits: int = 0
    budget_exceeded: int = 0
    steps: int = 0
    solve_time: float = 0.0

    def merge(self, other: "SolverStats"):
        for k, v in asdict(other).items():
            setattr(self, k, getattr(self, k) + v)

    def as_dict(self):
        return asdict(self)


class _Frame:
    __slots__ = ("cond", "nrows", "nnz", "nors", "nvars", "atoms")

    def __init__(self, cond, nrows, nnz, nors, nvars, atoms):
        self.cond = cond
        self.nrows = nrows
        self.nnz = nnz
        self.nors = nors
        self.nvars = nvars
        self.atoms = atoms


class SolverContext:
    """Stack of asserted conditions over variables with interval domains.

    Satisfying assignments found so far are kept in a small pool; a new check
    first tries them before running the search kernel.
    """

    def __init__(self, domains=(), budget: int = DEFAULT_BUDGET, pool_size: int = 8):
        if hasattr(domains, "variables"):
            domains = domains.variables()
        self.names: list[str] = []
        self.lo: list[int] = []
        self.hi: list[int] = []
        self._index: dict[str, int] = {}
        for name, lo, hi in domains:
            self.add_var(name, lo, hi)
        self.base_vars = len(self.names)
        self.budget = budget
        self.pool_size = pool_size
        self.stats = SolverStats()
        self._frames: list[_Frame] = []
        self._ors: list[Disj] = []
        self._asserted: dict[Atom, int] = {}
        cap = 64
        self._row_ptr = np.zeros(cap + 1, dtype=np.int64)
        self._consts = np.zeros(cap, dtype=np.int64)
        self._ops = np.zeros(cap, dtype=np.int64)
        self._cols = np.zeros(4 * cap, dtype=np.int64)
        self._coefs = np.zeros(4 * cap, dtype=np.int64)
        self._nrows = 0
        self._nnz = 0
        # [model, depth it is known to satisfy]
        self._pool: list[list] = [[list(self.lo), 0]]
        self._last = None

    # -- variables -------------------------------------------------------------
    def add_var(self, name: str, lo: int, hi: int) -> int:
        vid = len(self.names)
        self.names.append(name)
        self.lo.append(int(lo))
        self.hi.append(int(hi))
        self._index[name] = vid
        return vid

    def var(self, name: str) -> Lin:
        return Lin.var(self._index[name])

    def var_id(self, name: str) -> int:
        return self._index[name]

    @property
    def num_vars(self) -> int:
        return len(self.names)

    @property
    def depth(self) -> int:
        return len(self._frames)

    def bounds(self, lin) -> tuple[int, int]:
        if type(lin) is int:
            return lin, lin
        lo = hi = lin.const
        for v, c in lin.terms.items():
            if c > 0:
                lo += c * self.lo[v]
                hi += c * self.hi[v]
            else:
                lo += c * self.hi[v]
                hi += c * self.lo[v]
        return lo, hi

    def define_divmod(self, lin: Lin, c: int) -> tuple[int, int]:
        """Fresh (q, r) with ``lin == c*q + r`` and ``0 <= r < c``, asserted as a frame."""
        lo, hi = self.bounds(lin)
        n = len(self.names)
        q = self.add_var(f"_q{n}", lo // c, hi // c)
        r = self.add_var(f"_r{n}", 0, c - 1)
        for entry in self._pool:
            m = entry[0][:n]
            if len(m) < n:
                entry[1] = -1
                continue
            x = lin.value(m)
            entry[0] = m + [x // c, x % c]
        self._push(make_atom(EQ, lin - Lin({q: c, r: 1})), nvars=n)
        return q, r

    # -- stack -----------------------------------------------------------------
    def push(self, cond, hint=None):
        """Assert ``cond``. ``hint`` is an optional model known to satisfy the
        stack including ``cond``."""
        self._push(cond, nvars=len(self.names), hint=hint)

    def _push(self, cond, nvars, hint=None):
        atoms, ors = split(cond)
        self._frames.append(_Frame(cond, self._nrows, self._nnz, len(self._ors), nvars, atoms))
        for a in atoms:
            self._asserted[a] = self._asserted.get(a, 0) + 1
            self._add_row(a)
        self._ors.extend(ors)
        d = len(self._frames)
        for entry in self._pool:
            if entry[1] == d - 1 and holds(cond, entry[0]):
                entry[1] = d
        if hint is not None:
            self._remember(list(hint), d)
        self._last = None

    def pop(self):
        if not self._frames:
            raise StackUnderflow("pop on an empty solver stack")
        f = self._frames.pop()
        for a in f.atoms:
            k = self._asserted[a] - 1
            if k:
                self._asserted[a] = k
            else:
                del self._asserted[a]
        self._nrows = f.nrows
        self._nnz = f.nnz
        del self._ors[f.nors:]
        if f.nvars < len(self.names):
            for name in self.names[f.nvars:]:
                del self._index[name]
            del self.names[f.nvars:]
            del self.lo[f.nvars:]
            del self.hi[f.nvars:]
        d = len(self._frames)
        for entry in self._pool:
            if entry[1] > d:
                entry[1] = d
        self._last = None

    def reset(self):
        while self._frames:
            self.pop()

    @property
    def conditions(self) -> list:
        return [f.cond for f in self._frames]

    def _add_row(self, a: Atom):
        r, nz, k = self._nrows, self._nnz, len(a.coefs)
        if r + 1 >= len(self._consts):
            n = 2 * len(self._consts)
            self._consts = np.resize(self._consts, n)
            self._ops = np.resize(self._ops, n)
            self._row_ptr = np.resize(self._row_ptr, n + 1)
        if nz + k > len(self._cols):
            n = max(2 * len(self._cols), nz + k)
            self._cols = np.resize(self._cols, n)
            self._coefs = np.resize(self._coefs, n)
        self._cols[nz:nz + k] = a.cols
        self._coefs[nz:nz + k] = a.vals
        self._consts[r] = a.const
        self._ops[r] = a.op
        self._nrows = r + 1
        self._nnz = nz + k
        self._row_ptr[r + 1] = nz + k

    def _remember(self, model, depth):
        for entry in self._pool:
            if entry[0] is model or entry[0] == model:
                entry[1] = max(entry[1], depth)
                return
        self._pool.insert(0, [model, depth])
        del self._pool[self.pool_size:]

    # -- queries ---------------------------------------------------------------
    def check_sat(self) -> Result:
        self.stats.sat_calls += 1
        d = len(self._frames)
        for i, entry in enumerate(self._pool):
            if entry[1] >= d:
                if i:
                    self._pool.insert(0, self._pool.pop(i))
                self.stats.cache_hits += 1
                self._last = entry[0]
                return SAT
        # cheap syntactic refutation: an atom and its negation both asserted
        top = self._frames[-1].atoms if self._frames else ()
        for a in top:
            if negate(a) in self._asserted:
                self.stats.unsat_results += 1
                self._last = None
                return UNSAT
        t0 = time.perf_counter()
        self.stats.searches += 1
        try:
            model = self._search()
        finally:
            self.stats.solve_time += time.perf_counter() - t0
        if model is None:
            self.stats.unsat_results += 1
            self._last = None
            return UNSAT
        self._last = model
        self._remember(model, d)
        return SAT

    def _search(self):
        lo = np.array(self.lo, dtype=np.int64)
        hi = np.array(self.hi, dtype=np.int64)
        self._steps_left = self.budget
        return self._search_ors(list(self._ors), lo, hi)

    def _search_ors(self, ors, lo, hi):
        if not ors:
            status, steps, model = kernel.solve(
                self._row_ptr, self._cols, self._coefs, self._consts, self._ops,
                self._nrows, lo, hi, self._steps_left, PROBE_STEPS,
            )
            self._steps_left -= steps
            self.stats.steps += steps
            if status == kernel.OUT_OF_BUDGET or self._steps_left < 0:
                self.stats.budget_exceeded += 1
                raise SolverBudgetExceeded(f"solver exceeded {self.budget} propagation steps")
            return [int(x) for x in model] if status == kernel.SAT else None
        first, rest = ors[0], ors[1:]
        for part in first.parts:
            atoms, sub = split(part)
            if any(negate(a) in self._asserted for a in atoms):
                continue
            r0, z0 = self._nrows, self._nnz
            for a in atoms:
                self._add_row(a)
            try:
                model = self._search_ors(sub + rest, lo, hi)
            finally:
                self._nrows, self._nnz = r0, z0
            if model is not None:
                return model
        return None

    def check_with(self, cond) -> tuple[Result, list | None]:
        """Satisfiability of stack plus ``cond`` without keeping ``cond``."""
        self.push(cond)
        try:
            res = self.check_sat()
            return res, (self._last if res else None)
        finally:
            self.pop()

    def model_list(self) -> list[int]:
        if self._last is None:
            raise IllegalState("no model: last check_sat did not return SAT")
        return self._last

    def get_model(self) -> dict[str, int]:
        m = self.model_list()
        used = set()
        for f in self._frames:
            cond_vars(f.cond, used)
        return {name: (m[v] if v in used else self.lo[v]) for v, name in enumerate(self.names)}

    def maximize(self, objective):
        """Largest feasible value of a linear objective, with a witness model."""
        if not self.check_sat():
            raise IllegalState("maximize on an unsatisfiable context")
        if isinstance(objective, dict):
            objective = Lin({self._index[k] if isinstance(k, str) else k: c for k, c in objective.items()}, 0)
        best_model = self.model_list()
        best = objective if type(objective) is int else objective.value(best_model)
        _, hi = self.bounds(objective)
        lo = best
        # invariant: lo feasible, everything above hi infeasible
        while lo < hi:
            mid = (lo + hi + 1) // 2
            self.push(make_atom(LE, mid - objective))
            try:
                ok = self.check_sat()
                if ok:
                    m = self.model_list()
                    lo = objective.value(m)
                    best_model = m
                else:
                    hi = mid - 1
            finally:
                self.pop()
        self._last = best_model
        return lo, dict(zip(self.names, best_model))

    def export_smtlib(self) -> str:
        from .smtlib import to_smtlib

        return to_smtlib(self.names, self.lo, self.hi, self.conditions)
