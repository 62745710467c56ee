import pytest

from pathwca.bench.registry import registry
from pathwca.errors import NotFound, ProgramError
from pathwca.program import (
    Builder, Cost, If, Set, While, format_program, parse_expr, parse_program, reachable, successors, to_text,
    validate,
)

from conftest import TINY


def test_parse_roundtrip(tiny):
    text = format_program(tiny)
    again = parse_program(text)
    assert format_program(again) == text
    assert tiny.entry == 1
    assert [s.id for s in again.statements] == [1, 2, 3, 4, 5, 6]


@pytest.mark.parametrize("entry", registry(), ids=lambda e: e.id)
def test_benchmarks_roundtrip_and_validate(entry):
    p = entry.build(**({"N": 3} if "N" in entry.scale() else {}))
    assert validate(p).ok, str(validate(p))
    assert format_program(parse_program(format_program(p))) == format_program(p)


def test_branch_successors_false_side_first(tiny):
    s = tiny.statement(2)
    assert s.kind == "branch"
    assert successors(tiny, 2) == [4, 3]
    with pytest.raises(NotFound):
        tiny.statement(99)


@pytest.mark.parametrize("text", ["a + b * 2", "A[i + 1] % 3", "x < 3 and not (y == 2)", "(a // 2) - 1"])
def test_expr_text_roundtrip(text):
    e = parse_expr(text)
    assert parse_expr(to_text(e)) == e


@pytest.mark.parametrize("bad, fragment", [
    ("input X in [0, 9]\n1 halt\n", "program"),
    ("program p\n1 frobnicate -> 2\n2 halt\n", "frobnicate"),
    ("program p\n1 branch X < -> 2, 3\n2 halt\n3 halt\n", "line"),
    ("program p\ninput X in [0, 9]\n1 assign 3 -> 2\n2 halt\n", "assign"),
])
def test_parse_errors(bad, fragment):
    with pytest.raises(ProgramError) as ei:
        parse_program(bad)
    assert fragment in str(ei.value)


def _issues(text):
    try:
        p = parse_program(text)
    except ProgramError as e:
        return str(e)
    return validate(p).codes()


def test_validation_codes():
    dangling = "program p\ninput X in [0, 9]\n1 add_cost 1 -> 7\n2 halt\n"
    assert "dangling" in str(_issues(dangling))
    empty = "program p\ninput X in [5, 1]\n1 halt\n"
    assert "empty-interval" in str(_issues(empty))
    undeclared = "program p\n1 branch Z < 1 -> 2, 3\n2 halt\n3 halt\n"
    assert "undeclared" in str(_issues(undeclared))
    annotated_cost = "program p\n1 add_cost 1 -> 2 @always_sat\n2 halt\n"
    assert "annotation" in str(_issues(annotated_cost))


def test_reachable_skips_dead_code():
    p = parse_program(TINY + "7 add_cost 5 -> 6\n")
    assert 7 not in reachable(p)
    assert reachable(p) == {1, 2, 3, 4, 5, 6}


def test_builder_lowering(counting_loop):
    p = counting_loop
    assert p.entry == 1
    kinds = [s.kind for s in p.statements]
    assert kinds.count("branch") == 2 and kinds.count("halt") == 1
    assert validate(p).ok
    assert p.scale == {"N": 4}


def test_builder_marks_always_sat():
    b = Builder("m")
    A = b.input_array("A", 2, 0, 3)
    i = b.local("i")
    b.main(While(i < 2, [If(A[i] < 1, [Cost(1)], always_sat=True), Set(i, i + 1)]))
    p = b.build()
    marked = [s for s in p.statements if s.always_sat]
    assert len(marked) == 1 and marked[0].kind == "branch"
    assert "@always_sat" in format_program(p)
