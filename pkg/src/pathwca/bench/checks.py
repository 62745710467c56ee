"""Soundness checks for benchmark annotations and analytic maxima."""
from __future__ import annotations

import itertools
import math

import numpy as np

from ..concrete import concrete_cost
from ..errors import BudgetExceeded
from ..program.model import Program
from ..solver import SolverContext
from ..symbolic import Mode, enumerate_paths, execute
from .registry import BenchmarkEntry


def annotated_ids(program: Program) -> set[int]:
    return {s.id for s in program.statements if s.kind == "branch" and s.always_sat}


def check_annotations(entry: BenchmarkEntry, limit: int = 4096, samples: int = 0, seed: int = 0,
                      **scale) -> dict:
    """Run the program with its markers stripped and look for forced annotated branches.

    A marked branch is sound when both sides stay feasible on every path, i.e.
    the plain SKIP_UNSAT walk never forces it. Paths are enumerated when there
    are at most ``limit`` of them, otherwise ``samples`` random strings are used.
    """
    s = entry.scale(**scale)
    marked = annotated_ids(entry.builder(**s))
    plain = entry.builder(**s, annotate=False)
    forced: set[int] = set()
    exhaustive = True
    try:
        paths = enumerate_paths(plain, limit=limit)
        n = len(paths)
        for _, o in paths:
            forced.update(o.forced)
    except BudgetExceeded:
        exhaustive = False
        n = samples
        if entry.max_bits is None:
            raise
        M = entry.path_len(**scale)
        ctx = SolverContext(plain.input_spec)
        rng = np.random.default_rng(seed)
        for _ in range(samples):
            o = execute(plain, rng.integers(0, 2, M, dtype=np.uint8), Mode.SKIP_UNSAT, ctx)
            forced.update(o.forced)
    return {"annotated": marked, "violations": marked & forced, "paths": n, "exhaustive": exhaustive}


def input_space_size(program: Program) -> int:
    return math.prod(hi - lo + 1 for _, lo, hi in program.input_spec.variables())


def brute_force_max(program: Program, limit: int = 10**6):
    """Maximum concrete cost over every input, or None when there are more than ``limit``."""
    if input_space_size(program) > limit:
        return None
    ranges = [range(lo, hi + 1) for _, lo, hi in program.input_spec.variables()]
    return max(concrete_cost(program, flat) for flat in itertools.product(*ranges))
