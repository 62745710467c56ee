"""Compilation of a Program into per-statement Python closures.

Every expression is compiled twice: a concrete flavour over plain ints and a
symbolic flavour over ``int | Lin`` values whose comparisons build solver
conditions. Scalars live in a register list ``R``, arrays in ``A`` (a list of
lists); ``E`` is the symbolic environment used for ``//`` and ``%``.
"""
from __future__ import annotations

from .errors import ExecutionError, UnsupportedFeature
from .program.expr import BinOp, BoolConst, BoolOp, Cmp, Const, Index, Not, Var
from .program.model import Program
from .solver import linear as L

ASSIGN, BRANCH, COST, CALL, RETURN, HALT = range(6)
_KIND_CODE = {"assign": ASSIGN, "branch": BRANCH, "add_cost": COST, "call": CALL, "return": RETURN, "halt": HALT}
MAX_CALL_DEPTH = 10_000


def _rd(arr, i):
    if type(i) is not int:
        raise UnsupportedFeature("array read with a symbolic index")
    if 0 <= i < len(arr):
        return arr[i]
    raise ExecutionError(f"array index {i} out of range [0, {len(arr)})")


def _wr(arr, i, v):
    if type(i) is not int:
        raise UnsupportedFeature("array write with a symbolic index")
    if 0 <= i < len(arr):
        arr[i] = v
    else:
        raise ExecutionError(f"array index {i} out of range [0, {len(arr)})")


def _cdiv(a, b):
    if b == 0:
        raise ExecutionError("division by zero")
    return a // b


def _cmod(a, b):
    if b == 0:
        raise ExecutionError("modulo by zero")
    return a % b


def _sdivmod(E, a, b, want_mod):
    if type(b) is not int:
        raise UnsupportedFeature("division by a symbolic value")
    if type(a) is int:
        return _cmod(a, b) if want_mod else _cdiv(a, b)
    if b <= 0:
        raise UnsupportedFeature("symbolic division needs a positive constant divisor")
    if b == 1:
        return 0 if want_mod else a
    q, r = E.divmod(a, b)
    return L.Lin.var(r) if want_mod else L.Lin.var(q)


def _sdiv(E, a, b):
    return _sdivmod(E, a, b, False)


def _smod(E, a, b):
    return _sdivmod(E, a, b, True)


def _sand(a, rhs):
    if a is False:
        return False
    b = rhs()
    if a is True:
        return b
    return L.and_(a, b)


def _sor(a, rhs):
    if a is True:
        return True
    b = rhs()
    if a is False:
        return b
    return L.or_(a, b)


_GLOBALS = {
    "_rd": _rd, "_wr": _wr, "_cdiv": _cdiv, "_cmod": _cmod, "_sdiv": _sdiv, "_smod": _smod,
    "_sand": _sand, "_sor": _sor, "_snot": L.negate,
    "_lt": L.lt, "_le": L.le, "_eq": L.eq, "_ne": L.ne,
}
_SYM_CMP = {"<": "_lt", "<=": "_le", "==": "_eq", "!=": "_ne"}


class _Codegen:
    def __init__(self, scale, scalar_slot, array_slot):
        self.scale = scale
        self.scalar_slot = scalar_slot
        self.array_slot = array_slot

    def gen(self, e, sym: bool) -> str:
        if isinstance(e, Const):
            return f"({e.value})"
        if isinstance(e, BoolConst):
            return "True" if e.value else "False"
        if isinstance(e, Var):
            if e.name in self.scale:
                return f"({self.scale[e.name]})"
            return f"R[{self.scalar_slot[e.name]}]"
        if isinstance(e, Index):
            return f"_rd(A[{self.array_slot[e.array]}], {self.gen(e.index, sym)})"
        if isinstance(e, BinOp):
            l, r = self.gen(e.left, sym), self.gen(e.right, sym)
            if e.op == "//":
                return f"_sdiv(E, {l}, {r})" if sym else f"_cdiv({l}, {r})"
            if e.op == "%":
                return f"_smod(E, {l}, {r})" if sym else f"_cmod({l}, {r})"
            return f"({l} {e.op} {r})"
        if isinstance(e, Cmp):
            l, r = self.gen(e.left, sym), self.gen(e.right, sym)
            if sym:
                return f"{_SYM_CMP[e.op]}({l}, {r})"
            return f"({l} {e.op} {r})"
        if isinstance(e, BoolOp):
            l, r = self.gen(e.left, sym), self.gen(e.right, sym)
            if sym:
                fn = "_sand" if e.op == "and" else "_sor"
                return f"{fn}({l}, lambda: {r})"
            return f"({l} {e.op} {r})"
        if isinstance(e, Not):
            x = self.gen(e.operand, sym)
            return f"_snot({x})" if sym else f"(not {x})"
        raise TypeError(f"cannot compile {e!r}")

    def expr_fn(self, e, sym):
        return eval(f"lambda R, A, E: {self.gen(e, sym)}", _GLOBALS)

    def assign_fn(self, target, value, sym):
        v = self.gen(value, sym)
        if isinstance(target, Var):
            src = f"def f(R, A, E):\n    R[{self.scalar_slot[target.name]}] = {v}\n"
        else:
            i = self.gen(target.index, sym)
            src = f"def f(R, A, E):\n    _wr(A[{self.array_slot[target.array]}], {i}, {v})\n"
        ns = dict(_GLOBALS)
        exec(src, ns)
        return ns["f"]


class Compiled:
    """Flat, index-based view of a program ready for interpretation."""

    def __init__(self, program: Program):
        self.program = program
        spec = program.input_spec
        scale = program.scale
        self.scalar_names = [s.name for s in spec.scalars] + list(program.local_scalars)
        self.array_names = [a.name for a in spec.arrays] + [n for n, _ in program.local_arrays]
        self.array_lengths = [a.length for a in spec.arrays] + [k for _, k in program.local_arrays]
        self.n_input_scalars = len(spec.scalars)
        self.n_input_arrays = len(spec.arrays)
        self.n_inputs = spec.size()
        cg = _Codegen(
            scale,
            {n: k for k, n in enumerate(self.scalar_names)},
            {n: k for k, n in enumerate(self.array_names)},
        )
        index = program.index_of()
        n = len(program.statements)
        self.ids = [s.id for s in program.statements]
        self.kind = [0] * n
        self.next = [-1] * n  # single successor (or false side)
        self.true = [-1] * n
        self.callee = [-1] * n
        self.always_sat = [False] * n
        self.cfn = [None] * n
        self.sfn = [None] * n
        for k, s in enumerate(program.statements):
            code = _KIND_CODE[s.kind]
            self.kind[k] = code
            if s.out:
                self.next[k] = index[s.out[0]]
            if code == BRANCH:
                self.true[k] = index[s.out[1]]
                self.always_sat[k] = s.always_sat
            if code == CALL:
                self.callee[k] = index[s.callee]
            if code == ASSIGN:
                self.cfn[k] = cg.assign_fn(s.target, s.expr, False)
                self.sfn[k] = cg.assign_fn(s.target, s.expr, True)
            elif code in (BRANCH, COST):
                self.cfn[k] = cg.expr_fn(s.expr, False)
                self.sfn[k] = cg.expr_fn(s.expr, True)

    def fresh_state(self, scalar_inputs, array_inputs):
        R = list(scalar_inputs) + [0] * (len(self.scalar_names) - self.n_input_scalars)
        A = [list(a) for a in array_inputs]
        A += [[0] * k for k in self.array_lengths[self.n_input_arrays:]]
        return R, A

    def split_flat(self, flat):
        """Flat input vector (InputSpec.variables order) -> scalars, arrays."""
        ns = self.n_input_scalars
        scal = list(flat[:ns])
        arrs = []
        pos = ns
        for k in range(self.n_input_arrays):
            ln = self.array_lengths[k]
            arrs.append(list(flat[pos:pos + ln]))
            pos += ln
        return scal, arrs


def compiled(program: Program) -> Compiled:
    c = program._cache.get("compiled")
    if c is None:
        c = Compiled(program)
        program._cache["compiled"] = c
    return c
