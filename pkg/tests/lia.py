"""Random bounded linear integer instances plus an enumeration oracle."""
import itertools

from pathwca.solver import SolverContext
from pathwca.solver.linear import Lin, and_, eq, ge, gt, holds, le, lt, ne, or_

_CMP = (lt, le, eq, ne, ge, gt)


def _lin(rng, nvars):
    terms = {}
    for v in range(nvars):
        c = int(rng.integers(-3, 4))
        if c:
            terms[v] = c
    if not terms:
        terms[int(rng.integers(nvars))] = 1
    return Lin(terms, 0)


def _atom(rng, nvars):
    return _CMP[int(rng.integers(len(_CMP)))](_lin(rng, nvars), int(rng.integers(-12, 13)))


def random_condition(rng, nvars):
    r = rng.random()
    if r < 0.7:
        return _atom(rng, nvars)
    combine = or_ if r < 0.9 else and_
    return combine(_atom(rng, nvars), _atom(rng, nvars))


def random_instance(rng, max_vars=3, max_width=16, max_conds=5):
    """(domains, conditions); conditions that fold to a constant bool are kept as is."""
    n = int(rng.integers(1, max_vars + 1))
    domains = []
    for v in range(n):
        lo = int(rng.integers(-8, 9))
        domains.append((f"x{v}", lo, lo + int(rng.integers(0, max_width))))
    conds = [random_condition(rng, n) for _ in range(int(rng.integers(1, max_conds + 1)))]
    return domains, conds


def brute_force_sat(domains, conds):
    for model in itertools.product(*(range(lo, hi + 1) for _, lo, hi in domains)):
        if all(c is True or (c is not False and holds(c, model)) for c in conds):
            return True
    return False


def load(domains, conds):
    """A context with every condition pushed, or None if one folded to False."""
    ctx = SolverContext(domains)
    for c in conds:
        if c is False:
            return None
        if c is not True:
            ctx.push(c)
    return ctx
