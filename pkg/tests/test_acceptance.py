"""Acceptance criteria, one PASS/FAIL line each in the terminal summary.

These are long: the full file takes roughly forty minutes on one core.
"""
import itertools
import time

import numpy as np
import pytest

from pathwca.baselines import SymexeParams, symexe_search
from pathwca.bench.registry import lookup, registry
from pathwca.concrete import ConcreteInput, concrete_cost, extract_path_string, run_concrete
from pathwca.errors import BudgetExceeded, WcaError
from pathwca.evo import EvoParams, Individual, Population, crowdingness, run, select_next, weight
from pathwca.solver import SolverContext
from pathwca.solver.linear import holds
from pathwca.symbolic import Mode, enumerate_paths, execute, solve_witness

from lia import brute_force_sat, load, random_instance

pytestmark = pytest.mark.slow

# criterion -> {part: (ok, detail)}
_PARTS: dict = {}
RESULTS: dict = {}

ENTRIES = registry()
STRINGS = 10_000
WITNESSES = 1_000


def record(key, ok, detail, part="all"):
    _PARTS.setdefault(key, {})[part] = (bool(ok), detail)
    parts = _PARTS[key]
    bad = [p for p, (o, _) in parts.items() if not o]
    if len(parts) == 1:
        RESULTS[key] = (not bad, detail)
    else:
        summary = f"{len(parts) - len(bad)}/{len(parts)} parts ok"
        if bad:
            summary += "; failing: " + ", ".join(f"{p} ({parts[p][1]})" for p in bad)
        RESULTS[key] = (not bad, summary)
    print(f"criterion {key} [{part}]: {'PASS' if ok else 'FAIL'} {detail}")
    return ok


# -- 1: every random string maps to a satisfiable path ------------------------

@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.id)
def test_c1_complete_satisfiability(entry):
    p = entry.build()
    M = entry.path_len()
    ctx = SolverContext(p.input_spec)
    rng = np.random.default_rng(1000 + ENTRIES.index(entry))
    violations, first = 0, None
    for _ in range(STRINGS):
        q = rng.integers(0, 2, M, dtype=np.uint8)
        try:
            ok = execute(p, q, Mode.SKIP_UNSAT, ctx).sat
        except WcaError as e:
            ok, first = False, first or f"{type(e).__name__}: {e}"
        violations += not ok
    detail = f"{entry.id} M={M}: {violations} violations in {STRINGS}" + (f" ({first})" if first else "")
    assert record("1", violations == 0, detail, entry.id)


# -- 2: witness replay reproduces the symbolic cost ----------------------------

@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.id)
def test_c2_witness_oracle(entry):
    p = entry.build()
    M = entry.path_len()
    ctx = SolverContext(p.input_spec)
    rng = np.random.default_rng(2000 + ENTRIES.index(entry))
    mismatches = checked = 0
    while checked < WITNESSES:
        o = execute(p, rng.integers(0, 2, M, dtype=np.uint8), Mode.SKIP_UNSAT, ctx)
        if not o.sat:
            continue
        checked += 1
        mismatches += run_concrete(p, solve_witness(p, o)).total_cost != o.cost
    assert record("2", mismatches == 0, f"{entry.id}: {mismatches} mismatches in {checked}", entry.id)


# -- 3: QuickSort N=16 optimum --------------------------------------------------

def test_c3_quicksort_optimum():
    e = lookup("1-2")
    target = 16 * 17 // 2 - 1
    assert e.known_max(e.scale()) == target == 135
    hits, lines = 0, []
    for seed in (1, 2, 3, 4):
        rep = run(e.build(), EvoParams(psize=50, seed=seed, M=e.path_len(), budget_seconds=600,
                                        target_cost=target, mode="skip-unsat"))
        hit = rep.best_cost == target and rep.notes["witness_cost"] == target
        hits += hit
        lines.append(f"seed {seed}: {rep.best_cost} in {rep.wall_time:.1f}s")
    assert record("3", hits >= 3, f"{hits}/4 seeds reach {target} ({'; '.join(lines)})")


# -- 4: worked example bits ------------------------------------------------------

def test_c4_worked_example():
    p = lookup("1-2").build(N=8)
    t = run_concrete(p, ConcreteInput(p.input_spec, {"A": [3, 1, 4, 5, 3, 2, 2, 3]}))
    bits = extract_path_string(t)
    want = "1" "00" "00" "01" "1" "1" "01"
    assert record("4", bits[:11] == want, f"first-call bits {bits[:11]}, expected {want}")


# -- 5: pathfuzz vs symexe at desk scale ------------------------------------------

def _alternate0_brute_force():
    e = lookup("3-4")
    p = e.build(N=8)
    by_paths = max(o.cost for _, o in enumerate_paths(p))
    # cost only sees zero / non-zero, so {0, 1, 255} covers every pattern with margin
    by_inputs = max(concrete_cost(p, x) for x in itertools.product((0, 1, 255), repeat=8))
    return by_paths, by_inputs, e.known_max(e.scale(N=8))


def test_c5_baseline_ordering():
    by_paths, by_inputs, analytic = _alternate0_brute_force()
    ok_bf = by_paths == by_inputs == analytic
    record("5", ok_bf, f"Alternate0 N=8 max: paths {by_paths}, inputs {by_inputs}, analytic {analytic}",
           "alternate0-bf")
    for pid, n in (("1-2", 16), ("3-3", 20), ("3-4", 20)):
        e = lookup(pid)
        km = e.known_max(e.scale(N=n))
        sym = symexe_search(e.build(N=n), SymexeParams(budget_seconds=300, target_cost=km))
        fuzz = []
        for seed in (1, 2, 3, 4):
            rep = run(e.build(N=n), EvoParams(psize=50, seed=seed, M=e.path_len(N=n), budget_seconds=300,
                                               target_cost=km))
            fuzz.append(rep.best_cost)
        ok = all(f >= sym.best_cost for f in fuzz)
        if pid in ("3-3", "3-4"):
            ok = ok and all(f == km for f in fuzz)
        record("5", ok, f"{e.name} N={n}: pathfuzz {fuzz} vs symexe {sym.best_cost} (max {km})", e.name)
    assert all(o for o, _ in _PARTS["5"].values())


# -- 6: symexe equals path enumeration on small instances ---------------------------

def _small_instances(entry, limit=4096, max_n=32):
    """Every scale up to ``max_n``, smallest N first, whose program has at most ``limit`` paths."""
    lo_n, hi_n = entry.limits["N"][0], min(entry.limits["N"][1], max_n)
    for P in (range(entry.limits["P"][0], 6) if "P" in entry.limits else [None]):
        for n in range(lo_n, hi_n + 1):
            scale = {"N": n} if P is None else {"N": n, "P": P}
            program = entry.build(**scale)
            try:
                paths = enumerate_paths(program, limit=limit)
            except BudgetExceeded:
                break
            yield scale, program, paths


@pytest.mark.parametrize("entry", ENTRIES, ids=lambda e: e.id)
def test_c6_exhaustive_equality(entry):
    checked, bad = [], []
    for scale, program, paths in _small_instances(entry):
        want = max(o.cost for _, o in paths)
        got = symexe_search(program, SymexeParams(budget_seconds=600)).best_cost
        checked.append(scale)
        if got != want:
            bad.append(f"{scale} symexe {got} != {want}")
    ok = bool(checked) and not bad
    sizes = ",".join(str(c["N"]) for c in checked)
    assert record("6", ok, f"{entry.id}: {len(checked)} instances (N={sizes})" + (f"; {bad}" if bad else ""),
                  entry.id)


# -- 7: solver completeness -----------------------------------------------------------

def test_c7_solver_completeness():
    rng = np.random.default_rng(7)
    wrong, bad_models = 0, 0
    for _ in range(1000):
        domains, conds = random_instance(rng, max_vars=3, max_width=16)
        expected = brute_force_sat(domains, conds)
        ctx = load(domains, conds)
        got = bool(ctx.check_sat()) if ctx is not None else False
        wrong += got != expected
        if got:
            m = ctx.model_list()
            bad_models += not all(c is True or holds(c, m) for c in conds)
    record("7", wrong == 0 and bad_models == 0,
           f"{wrong} disagreements, {bad_models} bad models in 1000", "enumeration")

    z3 = pytest.importorskip("z3")
    rng = np.random.default_rng(77)
    disagree = sampled = 0
    while sampled < 100:
        domains, conds = random_instance(rng, max_vars=3, max_width=16)
        ctx = load(domains, conds)
        if ctx is None:
            continue
        sampled += 1
        s = z3.Solver()
        s.from_string(ctx.export_smtlib())
        disagree += (s.check() == z3.sat) != bool(ctx.check_sat())
    record("7", disagree == 0, f"{disagree} disagreements with z3 in {sampled} SMT-LIB files", "z3")
    assert all(o for o, _ in _PARTS["7"].values())


# -- 8: selection mechanics ---------------------------------------------------------------

def test_c8_selection_mechanics():
    rng = np.random.default_rng(8)
    gens = size_err = lost_best = 0
    while gens < 1000:
        psize = int(rng.integers(2, 60))
        r1 = float(rng.uniform(0, 0.5))
        r2 = float(rng.uniform(0, 1 - r1))
        params = EvoParams(psize=psize, r1=r1, r2=r2, beta=float(rng.uniform(0.2, 3)),
                           gamma=float(rng.uniform(0.2, 3)), offspring=int(rng.integers(psize, 2 * psize + 1)))
        M = int(rng.integers(4, 40))

        def ind():
            return Individual(rng.integers(0, 2, M, dtype=np.uint8), int(rng.integers(-1, 50)),
                              int(rng.integers(1, M + 1)))

        inds = [ind() for _ in range(psize)]
        pop = Population(0, inds, max(inds, key=lambda x: x.perf))
        for _ in range(50):
            best_prev = max(pop.individuals, key=lambda x: x.perf)
            pop = select_next(pop, [ind() for _ in range(params.n_offspring)], params, rng)
            gens += 1
            size_err += len(pop.individuals) != psize
            lost_best += not any(x is best_prev for x in pop.individuals)
    record("8", size_err == 0 and lost_best == 0,
           f"{gens} generations: {size_err} wrong sizes, {lost_best} lost bests", "selection")

    same = np.tile(np.array([1, 0, 1, 1, 0, 0, 1], dtype=np.uint8), (3, 1))
    crowd = crowdingness(same, [7, 7, 7]).tolist()
    record("8", crowd == [2.0, 2.0, 2.0], f"identical triple crowdingness {crowd}", "crowding")
    w11, w21 = float(weight(1, 1, 1.0, 0.5)), float(weight(2, 1, 1.0, 0.5))
    record("8", w11 == 1.0 and w21 == 0.5, f"weight(1,1)={w11}, weight(2,1)={w21}", "weights")
    assert all(o for o, _ in _PARTS["8"].values())
