"""Mutation and crossover on fixed-length path strings (uint8 arrays of 0/1).

Only the first ``m`` bits of a string influence execution, so every cut or
flip position is drawn from the used prefix.
"""
from __future__ import annotations

import numpy as np

MUTATIONS = ("A", "B")
CROSSOVERS = ("A", "B", "C")


def as_bits(q) -> np.ndarray:
    if isinstance(q, str):
        return np.frombuffer(q.replace(" ", "").encode(), dtype=np.uint8) - ord("0")
    return np.asarray(q, dtype=np.uint8)


def to_str(q, m: int | None = None) -> str:
    q = as_bits(q)
    if m is not None:
        q = q[:m]
    return (q + ord("0")).tobytes().decode()


def _fit(parts, M):
    out = np.concatenate(parts)[:M]
    if out.shape[0] < M:
        out = np.concatenate([out, np.zeros(M - out.shape[0], dtype=np.uint8)])
    return out


def mutate(q, m: int, kind: str, rng: np.random.Generator, p: int | None = None) -> np.ndarray:
    """Flip one used bit (kind A), or flip it and re-randomize everything after (kind B).

    ``p`` is the 1-based position; drawn uniformly from 1..m when omitted.
    """
    q = as_bits(q).copy()
    M = q.shape[0]
    m = min(m, M)
    if m <= 0:
        return q
    if p is None:
        p = int(rng.integers(1, m + 1))
    q[p - 1] ^= 1
    if kind == "B":
        q[p:] = rng.integers(0, 2, M - p, dtype=np.uint8)
    elif kind != "A":
        raise ValueError(f"unknown mutation kind {kind!r}")
    return q


def _span(m, rng):
    # 0-based [start, end) with start drawn from the used prefix
    s = int(rng.integers(0, m))
    e = int(rng.integers(s + 1, m + 1))
    return s, e


def crossover(q1, m1: int, q2, m2: int, kind: str, rng: np.random.Generator, cuts=None) -> np.ndarray:
    """Combine two strings; the result always has the length of ``q1``.

    A: ``q1[:c1] + q2[c2:]``. B: a substring of ``q1`` replaced by one of
    ``q2``. C: a substring of ``q2`` inserted into ``q1`` at ``c1``. ``cuts``
    overrides the random positions (A and C take (c1, c2) or (c1, s2, e2),
    B takes (s1, e1, s2, e2)).
    """
    q1 = as_bits(q1)
    q2 = as_bits(q2)
    M = q1.shape[0]
    m1 = min(m1, M)
    m2 = min(m2, q2.shape[0])
    if m1 <= 0 or m2 <= 0:
        return q1.copy()
    if kind == "A":
        c1, c2 = cuts or (int(rng.integers(1, m1 + 1)), int(rng.integers(1, m2 + 1)))
        return _fit([q1[:c1], q2[c2:]], M)
    if kind == "B":
        s1, e1, s2, e2 = cuts or (*_span(m1, rng), *_span(m2, rng))
        return _fit([q1[:s1], q2[s2:e2], q1[e1:]], M)
    if kind == "C":
        c1, s2, e2 = cuts or (int(rng.integers(1, m1 + 1)), *_span(m2, rng))
        return _fit([q1[:c1], q2[s2:e2], q1[c1:]], M)
    raise ValueError(f"unknown crossover kind {kind!r}")
