"""SMT-LIB v2 (QF_LIA) text export."""
from __future__ import annotations

from .linear import EQ, LE, Atom, Conj, Disj


def _num(c: int) -> str:
    return str(c) if c >= 0 else f"(- {-c})"


def _sym(name: str) -> str:
    if name.replace("_", "a").isalnum() and not name[0].isdigit():
        return name
    return f"|{name}|"


def _term(coefs, const, names) -> str:
    parts = []
    for v, c in coefs:
        x = _sym(names[v])
        parts.append(x if c == 1 else f"(* {_num(c)} {x})")
    if const or not parts:
        parts.append(_num(const))
    return parts[0] if len(parts) == 1 else "(+ " + " ".join(parts) + ")"


def cond_to_smt(c, names) -> str:
    if c is True:
        return "true"
    if c is False:
        return "false"
    if isinstance(c, Atom):
        t = _term(c.coefs, c.const, names)
        if c.op == LE:
            return f"(<= {t} 0)"
        if c.op == EQ:
            return f"(= {t} 0)"
        return f"(not (= {t} 0))"
    if isinstance(c, Conj):
        return "(and " + " ".join(cond_to_smt(p, names) for p in c.parts) + ")"
    if isinstance(c, Disj):
        return "(or " + " ".join(cond_to_smt(p, names) for p in c.parts) + ")"
    raise TypeError(f"not a condition: {c!r}")


def to_smtlib(names, lo, hi, conditions) -> str:
    out = ["(set-logic QF_LIA)"]
    for n in names:
        out.append(f"(declare-const {_sym(n)} Int)")
    for n, a, b in zip(names, lo, hi):
        s = _sym(n)
        out.append(f"(assert (and (<= {_num(a)} {s}) (<= {s} {_num(b)})))")
    for c in conditions:
        out.append(f"(assert {cond_to_smt(c, names)})")
    out.append("(check-sat)")
    return "\n".join(out) + "\n"
