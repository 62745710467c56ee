from .context import SAT, UNSAT, Result, SolverContext, SolverStats
from .linear import (
    EQ, LE, NE, Atom, Conj, Disj, Lin,
    and_, eq, ge, gt, holds, le, lt, make_atom, ne, negate, or_,
)
from .smtlib import to_smtlib
