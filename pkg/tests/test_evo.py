import numpy as np
import pytest

from pathwca.bench.registry import lookup
from pathwca.errors import ConfigError
from pathwca.evo import (
    EvoParams, Evaluator, Individual, Population, as_bits, crossover, crowdingness, init_population,
    make_offspring, mutate, rank_asc, rank_desc, run, select_next, sim, split_counts, to_str, weight,
)
from pathwca.evo.selection import select_indices
from pathwca.symbolic import Mode


def test_bit_conversions():
    q = as_bits("1011 00")
    assert q.tolist() == [1, 0, 1, 1, 0, 0]
    assert to_str(q) == "101100" and to_str(q, 3) == "101"


def test_mutation_kinds(rng):
    q = as_bits("00000000")
    a = mutate(q, 4, "A", rng, p=3)
    assert to_str(a) == "00100000"
    b = mutate(q, 4, "B", rng, p=2)
    assert to_str(b)[:2] == "01"
    assert q.sum() == 0  # input untouched
    for _ in range(200):
        r = mutate(q, 4, "A", rng)
        assert r.shape == q.shape and r.sum() == 1 and r[:4].sum() == 1
    with pytest.raises(ValueError):
        mutate(q, 4, "Z", rng)


def test_crossover_kinds(rng):
    q1, q2 = as_bits("11111111"), as_bits("00000000")
    assert to_str(crossover(q1, 8, q2, 8, "A", rng, cuts=(3, 6))) == "11100000"
    assert to_str(crossover(q1, 8, q2, 8, "B", rng, cuts=(2, 4, 0, 3))) == "11000111"
    assert to_str(crossover(q1, 8, q2, 8, "C", rng, cuts=(2, 0, 2))) == "11001111"
    for kind in "ABC":
        for _ in range(100):
            assert crossover(q1, 5, q2, 3, kind, rng).shape == (8,)
    with pytest.raises(ValueError):
        crossover(q1, 8, q2, 8, "D", rng)


def test_similarity():
    assert sim(as_bits("1010"), 4, as_bits("1011"), 4) == pytest.approx(3 / 4)
    assert sim(as_bits("10"), 2, as_bits("1011"), 8) == pytest.approx(2 / 4)
    assert sim(as_bits("0"), 0, as_bits("1"), 0) == 1.0
    assert sim(as_bits("0"), 0, as_bits("1"), 1) == 0.0


def test_crowdingness_sums_similarities(rng):
    bits = rng.integers(0, 2, (7, 12), dtype=np.uint8)
    used = rng.integers(1, 13, 7)
    c = crowdingness(bits, used)
    for i in range(7):
        want = sum(sim(bits[i], used[i], bits[j], used[j]) for j in range(7) if j != i)
        assert c[i] == pytest.approx(want)
    same = np.tile(as_bits("0110101"), (3, 1))
    assert crowdingness(same, [5, 5, 5]).tolist() == [2.0, 2.0, 2.0]


def test_ranks_and_weights():
    assert rank_desc([5, 9, 5, 1]).tolist() == [2, 1, 2, 4]
    assert rank_asc([0.5, 0.1, 0.5]).tolist() == [2, 1, 2]
    assert weight(1, 1, 1.0, 0.5) == 1.0
    assert weight(2, 1, 1.0, 0.5) == 0.5
    assert weight(1, 4, 1.0, 0.5) == 0.5


@pytest.mark.parametrize("psize, r1, r2, want", [
    (50, 0.2, 0.4, (10, 20, 20)), (10, 0.0, 0.5, (1, 4, 5)), (7, 0.2, 0.4, (1, 3, 3)), (2, 0.5, 0.5, (1, 1, 0)),
])
def test_split_counts(psize, r1, r2, want):
    got = split_counts(psize, r1, r2)
    assert got == want and sum(got) == psize


def test_select_indices_invariants(rng):
    for _ in range(300):
        psize = int(rng.integers(2, 40))
        r1 = float(rng.random())
        r2 = float(rng.random() * (1 - r1))
        prev = rng.integers(-1, 30, psize)
        n_off = int(rng.integers(1, 2 * psize))
        off = rng.integers(-1, 30, n_off)
        crowd = rng.random(n_off) * n_off
        kp, ko = select_indices(prev, off, crowd, psize, r1, r2, 1.0, 0.5, rng)
        assert len(kp) + len(ko) == psize or len(ko) == n_off
        assert int(np.argmax(prev)) in kp
        assert len(set(kp)) == len(kp) and len(set(ko)) == len(ko)


def test_params_validation():
    EvoParams().validate()
    for bad in ({"psize": 1}, {"r1": 0.7, "r2": 0.5}, {"beta": 0}, {"mode": "maybe"}, {"M": 0}, {"workers": 0}):
        with pytest.raises(ConfigError):
            EvoParams(**bad).validate()
    p = EvoParams.from_mapping({"psize": "20", "path-len": "64", "target_cost": "none", "gamma": "0.25"})
    assert (p.psize, p.M, p.target_cost, p.gamma) == (20, 64, None, 0.25)
    with pytest.raises(ConfigError):
        EvoParams.from_mapping({"colour": "red"})
    with pytest.raises(ConfigError):
        EvoParams.from_mapping({"psize": "many"})


def test_population_and_offspring(rng):
    e = lookup("1-1")
    p = e.build(N=6)
    M = e.path_len(N=6)
    params = EvoParams(psize=10, seed=0)
    ev = Evaluator(p, Mode.SKIP_UNSAT)
    pop = init_population(p, params, ev, rng, M)
    origins = [i.origin for i in pop.individuals]
    assert origins.count("random") == 5 and origins.count("seeded") == 5
    assert all(i.sat for i in pop.individuals)
    items = make_offspring(pop, params, rng)
    assert len(items) == 10 and all(q.shape == (M,) for q, _ in items)
    kids = [ev.evaluate(q, o) for q, o in items]
    nxt = select_next(pop, kids, params, rng)
    assert len(nxt.individuals) == 10 and nxt.generation == 1
    assert nxt.best_ever.perf >= pop.best_ever.perf
    assert pop.best_ever in nxt.individuals or nxt.best_ever.perf > pop.best_ever.perf


def test_evaluator_marks_errors():
    e = lookup("1-1")
    ev = Evaluator(e.build(N=6), Mode.SKIP_UNSAT)
    ind = ev.evaluate(np.zeros(2, dtype=np.uint8))
    assert ind.perf == -1 and not ind.sat and "PathTooShort" in ind.error
    assert ev.counters()["errors"] == 1


def test_run_reaches_small_optimum():
    e = lookup("1-1")
    rep = run(e.build(N=6), EvoParams(psize=20, M=e.path_len(N=6), seed=3, budget_seconds=60,
                                      target_cost=e.known_max(e.scale(N=6))))
    assert rep.best_cost == 15
    assert rep.notes["witness_cost"] == 15
    assert rep.sat_rate == 1.0
    assert rep.curve[-1][1] == 15


def test_run_is_deterministic_per_seed():
    e = lookup("3-4")
    kw = dict(psize=12, M=e.path_len(N=8), max_iters=5, budget_seconds=1e9)
    a = run(e.build(N=8), EvoParams(seed=7, **kw))
    b = run(e.build(N=8), EvoParams(seed=7, **kw))
    assert (a.best_cost, a.best_path, a.evals) == (b.best_cost, b.best_path, b.evals)


def test_parallel_matches_serial():
    e = lookup("1-5")
    kw = dict(psize=10, M=e.path_len(N=6), max_iters=3, budget_seconds=1e9, seed=2)
    a = run(e.build(N=6), EvoParams(**kw))
    b = run(e.build(N=6), EvoParams(workers=2, **kw))
    assert (a.best_cost, a.best_path, a.evals) == (b.best_cost, b.best_path, b.evals)


def test_default_mapping_run_has_unsat_strings(unsat_demo):
    rep = run(unsat_demo, EvoParams(psize=10, M=4, max_iters=3, budget_seconds=1e9, mode="default"))
    assert rep.notes["mode"] == "default"
    assert rep.sat_rate < 1.0
    assert rep.best_cost == 2
    skip = run(unsat_demo, EvoParams(psize=10, M=4, max_iters=3, budget_seconds=1e9))
    assert skip.sat_rate == 1.0


def test_individual_bits():
    ind = Individual(as_bits("110100"), 3, 4)
    assert ind.bits() == "1101" and ind.sat
    assert Population(0, [ind], ind).best is ind


def test_large_beta_follows_perf_rank(rng):
    # with a very steep perf exponent the weighted picks are the next best by perf
    off = rng.permutation(40)
    crowd = rng.random(40)
    corr = []
    for _ in range(20):
        _, ko = select_indices(np.array([100]), off, crowd, 11, 0.0, 0.0, 50.0, 0.5, rng)
        picked = sorted(off[ko].tolist(), reverse=True)
        corr.append(np.corrcoef(picked, sorted(off.tolist(), reverse=True)[:len(picked)])[0, 1])
    assert np.mean(corr) > 0.99


def test_best_ever_is_monotone():
    e = lookup("1-2")
    rep = run(e.build(N=8), EvoParams(psize=10, M=e.path_len(N=8), max_iters=15, budget_seconds=1e9, seed=4))
    bests = [b for _, b, _ in rep.curve]
    assert bests == sorted(bests)
    assert rep.sat_rate == 1.0 and rep.errors == 0
