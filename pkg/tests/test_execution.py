"""Concrete interpretation and path-string driven symbolic execution."""
import numpy as np
import pytest

from pathwca.bench.registry import lookup
from pathwca.concrete import (
    ConcreteInput, concrete_cost, extract_path_string, random_input, run_concrete,
)
from pathwca.errors import BudgetExceeded, ExecutionError, IllegalState, InputError, PathTooShort, UnsupportedFeature
from pathwca.program import parse_program
from pathwca.solver import SolverContext
from pathwca.symbolic import (
    Mode, enumerate_paths, estimate_M, execute, guided_bits, related_path_string, solve_witness,
)


def _inp(p, **vals):
    return ConcreteInput(p.input_spec, vals)


def test_concrete_costs(tiny):
    costs = [run_concrete(tiny, _inp(tiny, X=x)).total_cost for x in range(10)]
    # X<5 pays 2, X==7 pays 1
    assert costs == [2, 2, 2, 2, 2, 0, 0, 1, 0, 0]
    assert concrete_cost(tiny, [7]) == 1


def test_trace_records_branches(tiny):
    t = run_concrete(tiny, _inp(tiny, X=7))
    assert t.stmt_ids == [1, 2, 4, 5, 6]
    assert [(sid, side) for _, sid, side in t.branches] == [(2, False), (4, True)]
    assert t.steps == 5


@pytest.mark.parametrize("vals", [{"X": 10}, {"X": -1}, {}, {"X": 1, "Y": 2}])
def test_input_validation(tiny, vals):
    with pytest.raises(InputError):
        ConcreteInput(tiny.input_spec, vals)


def test_input_text_and_flat_roundtrip(counting_loop):
    inp = ConcreteInput(counting_loop.input_spec, {"A": [1, 4, 2, 1]})
    assert ConcreteInput.from_text(counting_loop.input_spec, inp.to_text()) == inp
    assert ConcreteInput.from_flat(counting_loop.input_spec, inp.flat()) == inp
    assert run_concrete(counting_loop, inp).total_cost == 2


def test_runtime_errors():
    div0 = parse_program("program d\ninput X in [0, 3]\nlocal y\n1 assign y = 4 // X -> 2\n2 halt\n")
    with pytest.raises(ExecutionError):
        concrete_cost(div0, [0])
    assert concrete_cost(div0, [2]) == 0
    oob = parse_program("program o\ninput X in [0, 3]\ninput A[2] in [0, 1]\nlocal y\n"
                        "1 assign y = A[X] -> 2\n2 halt\n")
    with pytest.raises(ExecutionError):
        concrete_cost(oob, [3, 0, 0])
    loop = parse_program("program l\ninput X in [0, 1]\n1 add_cost 1 -> 1\n")
    with pytest.raises(BudgetExceeded):
        concrete_cost(loop, [0], step_budget=100)


def test_symbolic_index_is_unsupported():
    p = parse_program("program s\ninput X in [0, 1]\ninput A[2] in [0, 1]\nlocal y\n"
                      "1 assign y = A[X] -> 2\n2 halt\n")
    with pytest.raises(UnsupportedFeature):
        execute(p, "0")


# -- worked example -------------------------------------------------------------

def test_quicksort_example_bits():
    p = lookup("1-2").build(N=8)
    t = run_concrete(p, _inp(p, A=[3, 1, 4, 5, 3, 2, 2, 3]))
    s = extract_path_string(t)
    assert s[:11] == "10000011101"
    assert extract_path_string(t, 40) == s + "0" * (40 - len(s))
    assert execute(p, s).cost == t.total_cost


# -- mappings -------------------------------------------------------------------

def test_default_mapping_consumes_a_bit_per_symbolic_branch(unsat_demo):
    o = execute(unsat_demo, "11", Mode.DEFAULT)
    assert o.m == 2 and not o.sat
    o = execute(unsat_demo, "10", Mode.DEFAULT)
    assert o.m == 2 and o.sat and o.cost == 1
    assert execute(unsat_demo, "01").cost == 2


def test_skip_unsat_forces_without_consuming(unsat_demo):
    o = execute(unsat_demo, "11", Mode.SKIP_UNSAT)
    assert o.sat and o.m == 1 and o.cost == 1
    assert o.forced == [3]
    assert execute(unsat_demo, "1", Mode.SKIP_UNSAT).m == 1


def test_path_too_short(unsat_demo):
    with pytest.raises(PathTooShort):
        execute(unsat_demo, "0", Mode.SKIP_UNSAT)
    with pytest.raises(PathTooShort):
        execute(unsat_demo, "", Mode.DEFAULT)


def test_padding_beyond_m_is_inert(tiny, rng):
    for _ in range(20):
        q = rng.integers(0, 2, 12, dtype=np.uint8)
        o = execute(tiny, q, Mode.SKIP_UNSAT)
        q2 = q.copy()
        q2[o.m:] ^= 1
        o2 = execute(tiny, q2, Mode.SKIP_UNSAT)
        assert (o2.cost, o2.m) == (o.cost, o.m)


def test_mode_parse():
    assert Mode.parse("SKIP_UNSAT") is Mode.SKIP_UNSAT
    assert Mode.parse("default") is Mode.DEFAULT
    with pytest.raises(ValueError):
        Mode.parse("sometimes")


# -- witnesses and related strings ----------------------------------------------

@pytest.mark.parametrize("pid, scale", [("1-2", {"N": 6}), ("1-8", {"N": 4, "P": 3}), ("3-4", {"N": 6}),
                                        ("1-4", {"N": 3})])
def test_witness_follows_path(pid, scale, rng):
    p = lookup(pid).build(**scale)
    M = lookup(pid).path_len(**scale)
    ctx = SolverContext(p.input_spec)
    for _ in range(30):
        o = execute(p, rng.integers(0, 2, M, dtype=np.uint8), Mode.SKIP_UNSAT, ctx)
        assert o.sat
        inp = solve_witness(p, o)
        assert run_concrete(p, inp).total_cost == o.cost


def test_no_witness_for_unsat(unsat_demo):
    o = execute(unsat_demo, "11", Mode.DEFAULT)
    with pytest.raises(IllegalState):
        solve_witness(unsat_demo, o)


@pytest.mark.parametrize("mode", list(Mode))
def test_related_string_reproduces_cost(mode, rng):
    e = lookup("1-1")
    p = e.build(N=6)
    M = e.path_len(N=6)
    for _ in range(20):
        inp = random_input(p.input_spec, rng)
        q = related_path_string(p, inp, M, mode)
        o = execute(p, q, mode)
        assert o.sat and o.cost == run_concrete(p, inp).total_cost


def test_related_string_too_long():
    p = lookup("1-1").build(N=6)
    inp = ConcreteInput(p.input_spec, {"A": [6, 5, 4, 3, 2, 1]})
    with pytest.raises(PathTooShort):
        related_path_string(p, inp, 3)


def test_guided_bits_skip_unsat_drops_forced(unsat_demo):
    inp = ConcreteInput(unsat_demo.input_spec, {"X": 1})
    assert guided_bits(unsat_demo, inp, Mode.DEFAULT)[0] == [1, 0]
    assert guided_bits(unsat_demo, inp, Mode.SKIP_UNSAT)[0] == [1]


def test_estimate_M(tiny):
    assert estimate_M(tiny, samples=20, margin=2.0) == 4
    with pytest.raises(ValueError):
        estimate_M(tiny, samples=0)


def test_enumerate_paths(unsat_demo, tiny):
    paths = enumerate_paths(unsat_demo)
    assert sorted(o.cost for _, o in paths) == [0, 1, 2]
    assert max(o.cost for _, o in enumerate_paths(tiny)) == max(concrete_cost(tiny, [x]) for x in range(10))
    with pytest.raises(BudgetExceeded):
        enumerate_paths(lookup("1-1").build(N=5), limit=10)


def test_divmod_paths_agree_with_concrete(rng):
    e = lookup("1-8")
    p = e.build(N=3, P=5)
    best = max(o.cost for _, o in enumerate_paths(p))
    brute = max(concrete_cost(p, random_input(p.input_spec, rng).flat()) for _ in range(3000))
    assert best >= brute
    assert best == e.known_max(e.scale(N=3, P=5))


def test_default_sat_implies_skip_unsat_sat(rng):
    e = lookup("1-4")  # carries no annotations
    p = e.build(N=3)
    M = e.path_len(N=3)
    seen = 0
    for _ in range(200):
        q = rng.integers(0, 2, M, dtype=np.uint8)
        if execute(p, q, Mode.DEFAULT).sat:
            seen += 1
            assert execute(p, q, Mode.SKIP_UNSAT).sat
    assert seen > 0
