import numpy as np
import pytest

from pathwca.program import Builder, Cost, If, Set, While, parse_program

TINY = """\
program tiny
input X in [0, 9]
local y
1 assign y = 0 -> 2
2 branch X < 5 -> 4, 3
3 add_cost 2 -> 4
4 branch X == 7 -> 6, 5
5 add_cost 1 -> 6
6 halt
"""

# X < 3 on the true side makes the later 5 < X branch one-sided
UNSAT_DEMO = """\
program unsat_demo
input X in [0, 9]
1 branch X < 3 -> 3, 2
2 add_cost 1 -> 3
3 branch 5 < X -> 5, 4
4 add_cost 2 -> 5
5 halt
"""


@pytest.fixture
def tiny():
    return parse_program(TINY)


@pytest.fixture
def unsat_demo():
    return parse_program(UNSAT_DEMO)


@pytest.fixture
def counting_loop():
    """Costs one unit per element below 2, over a length-4 array."""
    b = Builder("count", scale={"N": 4})
    A = b.input_array("A", 4, 1, 4)
    i = b.local("i")
    b.main(While(i < 4, [If(A[i] < 2, [Cost(1)]), Set(i, i + 1)]))
    return b.build()


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if not RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(RESULTS):
        ok, detail = RESULTS[key]
        terminalreporter.write_line(f"criterion {key}: {'PASS' if ok else 'FAIL'}  {detail}")
