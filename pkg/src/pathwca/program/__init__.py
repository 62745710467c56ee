from .builder import Break, Builder, Call, Cost, Halt, If, Return, Set, While
from .expr import (
    BinOp, BoolConst, BoolOp, Cmp, Const, Expr, Index, Not, Var,
    and_, eq, ne, not_, or_, parse_expr, to_text,
)
from .model import (
    ArrayInput, InputSpec, Issue, Program, ScalarInput, Statement,
    ValidationReport, reachable, successors, validate,
)
from .text import format_program, format_statement, parse_program
