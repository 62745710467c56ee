"""Compare the numba kernels with their pure Python / numpy fallbacks.

    python benchmarks/bench_kernels.py [--quick]

Three measurements: the crowding kernel used by selection, the solver kernel
replayed on constraint systems recorded from a real benchmark, and whole
evolutionary runs in a subprocess with PATHWCA_DISABLE_NUMBA set or not.
"""
import argparse
import json
import os
import pickle
import subprocess
import sys
import tempfile
import time

import numpy as np

from pathwca._accel import HAS_NUMBA
from pathwca.solver import context as solver_context
from pathwca.solver import kernel


def timeit(fn, *args, repeat=3, number=1):
    best = float("inf")
    for _ in range(repeat):
        t = time.perf_counter()
        for _ in range(number):
            fn(*args)
        best = min(best, (time.perf_counter() - t) / number)
    return best


def py(f):
    return getattr(f, "py_func", f)


def bench_crowding(n, width):
    rng = np.random.default_rng(0)
    bits = rng.integers(0, 2, (n, width), dtype=np.uint8)
    bits[: n // 2, : width // 3] = 0  # shared prefixes make the LCP loops do real work
    used = rng.integers(1, width + 1, n)
    kernel.prefix_crowding(bits, used)  # compile
    rows = [
        ("prefix_crowding numba", timeit(kernel.prefix_crowding, bits, used, number=5)),
        ("prefix_crowding numpy", timeit(kernel.prefix_crowding_numpy, bits, used, number=5)),
        ("prefix_crowding python", timeit(py(kernel.prefix_crowding), bits, used, repeat=1)),
    ]
    return rows


def record_instances(program_id, strings, seed=0):
    """Constraint systems handed to the solver kernel while running random strings."""
    from pathwca.bench.registry import lookup
    from pathwca.symbolic import Mode, execute
    from pathwca.solver import SolverContext

    seen = []
    real = kernel.solve

    def spy(*args):
        seen.append(tuple(a.copy() if isinstance(a, np.ndarray) else a for a in args))
        return real(*args)

    entry = lookup(program_id)
    program = entry.build()
    M = entry.path_len()
    ctx = SolverContext(program.input_spec)
    rng = np.random.default_rng(seed)
    solver_context.kernel.solve = spy
    try:
        for _ in range(strings):
            execute(program, rng.integers(0, 2, M, dtype=np.uint8), Mode.SKIP_UNSAT, ctx)
    finally:
        solver_context.kernel.solve = real
    return seen


_REPLAY_SNIPPET = """
import pickle, sys, time
from pathwca.solver import kernel
with open(sys.argv[1], "rb") as f:
    instances = pickle.load(f)
for args in instances[:5]:
    kernel.solve(*args)  # warm up / compile
best = float("inf")
for _ in range(int(sys.argv[2])):
    t = time.perf_counter()
    for args in instances:
        kernel.solve(*args)
    best = min(best, time.perf_counter() - t)
print(best)
"""


def bench_solver(instances):
    """Replay the systems in fresh interpreters, one per backend."""
    with tempfile.NamedTemporaryFile(suffix=".pkl", delete=False) as f:
        pickle.dump(instances, f)
        path = f.name
    rows = []
    try:
        for label, disable, repeat in (("numba", "", 3), ("python", "1", 1)):
            env = dict(os.environ, PATHWCA_DISABLE_NUMBA=disable)
            out = subprocess.run([sys.executable, "-c", _REPLAY_SNIPPET, path, str(repeat)],
                                 env=env, capture_output=True, text=True, check=True)
            rows.append((f"solve {label} ({len(instances)} systems)", float(out.stdout.strip().splitlines()[-1])))
    finally:
        os.unlink(path)
    return rows


_EA_SNIPPET = """
import json, sys, time
from pathwca.bench.registry import lookup
from pathwca.evo import EvoParams, run
e = lookup(sys.argv[1])
t = time.perf_counter()
r = run(e.build(), EvoParams(seed=1, M=e.path_len(), max_iters=int(sys.argv[2]), budget_seconds=1e9))
print(json.dumps({"evals": r.evals, "seconds": time.perf_counter() - t, "best": r.best_cost}))
"""


def bench_end_to_end(program_id, iters):
    rows = []
    for label, disable in (("numba", ""), ("python", "1")):
        env = dict(os.environ, PATHWCA_DISABLE_NUMBA=disable)
        out = subprocess.run([sys.executable, "-c", _EA_SNIPPET, program_id, str(iters)],
                             env=env, capture_output=True, text=True, check=True)
        d = json.loads(out.stdout.strip().splitlines()[-1])
        rows.append((f"pathfuzz {program_id} {iters} gens {label}", d["seconds"],
                     f"{d['evals'] / d['seconds']:.0f} evals/s, best {d['best']}"))
    return rows


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--quick", action="store_true")
    args = ap.parse_args()
    if not HAS_NUMBA:
        sys.exit("numba is not available (or disabled); nothing to compare")
    rows = []
    rows += bench_crowding(50 if args.quick else 100, 240)
    rows += bench_solver(record_instances("1-6", 3 if args.quick else 10))
    rows += bench_end_to_end("1-4", 3 if args.quick else 10)
    width = max(len(r[0]) for r in rows)
    for r in rows:
        extra = f"  {r[2]}" if len(r) > 2 else ""
        print(f"{r[0]:<{width}}  {r[1] * 1000:10.2f} ms{extra}")


if __name__ == "__main__":
    main()
