import numpy as np
import pytest

from pathwca.errors import IllegalState, SolverBudgetExceeded, StackUnderflow
from pathwca.solver import SolverContext, kernel, to_smtlib
from pathwca.solver.linear import EQ, LE, NE, Lin, and_, eq, ge, holds, le, lt, make_atom, ne, negate, or_

from lia import brute_force_sat, load, random_instance

x, y, z = Lin.var(0), Lin.var(1), Lin.var(2)


def test_lin_folding():
    assert (x - x) == 0
    assert (x + 2 * y - y - y + 3) .const == 3
    assert lt(x - x, 1) is True
    assert eq(x + 0, x) is True
    assert le(3, 2) is False
    with pytest.raises(Exception):
        x * y


def test_atoms_normalize():
    a = le(2 * x, 4)
    b = le(x, 2)
    assert a == b and hash(a) == hash(b)
    assert negate(negate(a)) == a
    assert holds(ne(x, 3), [4]) and not holds(ne(x, 3), [3])
    # 2x == 3 has no integer solution
    assert eq(2 * x, 3) is False


def test_negation_is_complement(rng):
    for _ in range(200):
        c = or_(lt(x + 2 * y, int(rng.integers(-5, 6))), eq(x - y, int(rng.integers(-3, 4))))
        for _ in range(5):
            m = [int(v) for v in rng.integers(-6, 7, 2)]
            assert holds(negate(c), m) != holds(c, m)


def test_push_pop_and_model():
    ctx = SolverContext([("a", 0, 9), ("b", 0, 9)])
    a, b = ctx.var("a"), ctx.var("b")
    ctx.push(lt(a + b, 5))
    ctx.push(ge(a, 3))
    assert ctx.check_sat()
    m = ctx.get_model()
    assert m["a"] >= 3 and m["a"] + m["b"] < 5
    ctx.push(ge(b, 3))
    assert not ctx.check_sat()
    with pytest.raises(IllegalState):
        ctx.model_list()
    ctx.pop()
    assert ctx.check_sat() and ctx.depth == 2
    ctx.reset()
    with pytest.raises(StackUnderflow):
        ctx.pop()


def test_check_with_leaves_stack_alone():
    ctx = SolverContext([("a", 0, 3)])
    a = ctx.var("a")
    ctx.push(ne(a, 0))
    ok, model = ctx.check_with(eq(a, 2))
    assert ok and model[0] == 2
    ok, _ = ctx.check_with(lt(a, 1))
    assert not ok
    assert ctx.depth == 1


def test_disjunction_search():
    ctx = SolverContext([("a", 0, 20), ("b", 0, 20)])
    a, b = ctx.var("a"), ctx.var("b")
    ctx.push(or_(eq(a, 17), eq(b, 19)))
    ctx.push(lt(a, 10))
    assert ctx.check_sat()
    assert ctx.get_model()["b"] == 19


def test_divmod_definition():
    ctx = SolverContext([("a", 0, 30)])
    a = ctx.var("a")
    q, r = ctx.define_divmod(a, 7)
    ctx.push(eq(Lin.var(r), 3))
    ctx.push(eq(Lin.var(q), 2))
    assert ctx.check_sat()
    assert ctx.model_list()[0] == 17
    ctx.reset()
    assert ctx.num_vars == 1


def test_maximize():
    ctx = SolverContext([("a", 0, 10), ("b", 0, 10)])
    a, b = ctx.var("a"), ctx.var("b")
    ctx.push(le(2 * a + 3 * b, 17))
    best, model = ctx.maximize(a + b)
    assert best == 8
    assert 2 * model["a"] + 3 * model["b"] <= 17 and model["a"] + model["b"] == 8


def test_budget_exceeded_raises():
    names = [(f"v{k}", 0, 1000) for k in range(3)]
    ctx = SolverContext(names, budget=3)
    v = [ctx.var(n) for n, _, _ in names]
    ctx.push(eq(3 * v[0] + 5 * v[1] + 7 * v[2], 2001))
    ctx.push(ne(v[0], v[1]))
    with pytest.raises(SolverBudgetExceeded):
        ctx.check_sat()
    assert ctx.stats.budget_exceeded == 1
    roomy = SolverContext(names)
    roomy.push(eq(3 * v[0] + 5 * v[1] + 7 * v[2], 2001))
    roomy.push(ne(v[0], v[1]))
    assert roomy.check_sat()


def test_random_instances_match_enumeration(rng):
    for _ in range(300):
        domains, conds = random_instance(rng)
        expected = brute_force_sat(domains, conds)
        ctx = load(domains, conds)
        got = bool(ctx.check_sat()) if ctx is not None else False
        assert got == expected, (domains, conds)
        if got and ctx is not None:
            m = ctx.model_list()
            assert all(c is True or holds(c, m) for c in conds)
            assert all(lo <= m[k] <= hi for k, (_, lo, hi) in enumerate(domains))


def test_model_pool_hits():
    ctx = SolverContext([("a", 0, 100)])
    a = ctx.var("a")
    ctx.push(le(a, 50))
    assert ctx.check_sat()
    assert ctx.stats.cache_hits == 1  # all-lower-bounds model satisfies it
    ctx.push(ge(a, 40))
    assert ctx.check_sat()
    assert ctx.stats.searches == 1


def test_smtlib_text():
    text = to_smtlib(["a", "b c"], [0, -2], [3, 4], [make_atom(LE, x - y - 1), or_(eq(x, 2), ne(y, -1))])
    assert text.startswith("(set-logic QF_LIA)")
    assert "(declare-const a Int)" in text and "|b c|" in text
    assert "(- 2)" in text
    assert text.rstrip().endswith("(check-sat)")


def test_smtlib_agrees_with_z3(rng):
    z3 = pytest.importorskip("z3")
    for _ in range(40):
        domains, conds = random_instance(rng)
        ctx = load(domains, conds)
        if ctx is None:
            continue
        s = z3.Solver()
        s.from_string(ctx.export_smtlib())
        assert (s.check() == z3.sat) == bool(ctx.check_sat())


def test_kernel_backends_agree(rng):
    bits = rng.integers(0, 2, (12, 30), dtype=np.uint8)
    bits[:4, :10] = 0
    used = rng.integers(0, 31, 12)
    a = kernel.prefix_crowding(bits, used)
    b = kernel.prefix_crowding_numpy(bits, used)
    assert np.allclose(a, b)
    vals = rng.integers(0, 5, (9, 6))
    assert np.allclose(kernel.hamming_crowding(vals), kernel.hamming_crowding_numpy(vals))
