"""Survivor selection: elitist carry-over, top offspring, and a weighted rest."""
from __future__ import annotations

import math

import numpy as np

from ..solver import kernel


def crowdingness(bits: np.ndarray, used) -> np.ndarray:
    """Sum of normalized common-prefix similarity to every other string."""
    prefix, _ = kernel.crowding_functions()
    return prefix(np.ascontiguousarray(bits, dtype=np.uint8), np.asarray(used, dtype=np.int64))


def sim(q1, m1: int, q2, m2: int) -> float:
    if m1 == 0 and m2 == 0:
        return 1.0
    if m1 == 0 or m2 == 0:
        return 0.0
    lim = min(m1, m2)
    a, b = np.asarray(q1[:lim]), np.asarray(q2[:lim])
    d = np.flatnonzero(a != b)
    lcp = int(d[0]) if d.size else lim
    return lcp / math.sqrt(m1 * m2)


def weight(i, j, beta: float, gamma: float):
    """Selection weight for perf rank ``i`` and crowding rank ``j`` (both 1-based)."""
    return np.power(np.asarray(i, dtype=float), -beta) * np.power(np.asarray(j, dtype=float), -gamma)


def rank_desc(values) -> np.ndarray:
    """Competition ranks, 1 for the largest value; ties share the better rank."""
    v = np.asarray(values, dtype=float)
    return 1 + (v[None, :] > v[:, None]).sum(axis=1)


def rank_asc(values) -> np.ndarray:
    v = np.asarray(values, dtype=float)
    return 1 + (v[None, :] < v[:, None]).sum(axis=1)


def split_counts(psize: int, r1: float, r2: float) -> tuple[int, int, int]:
    """Largest-remainder split of psize into (carried, top, weighted); carried >= 1."""
    shares = [r1 * psize, r2 * psize, (1.0 - r1 - r2) * psize]
    base = [math.floor(s + 1e-9) for s in shares]
    rem = psize - sum(base)
    order = sorted(range(3), key=lambda k: (-(shares[k] - base[k]), k))
    for k in order[:rem]:
        base[k] += 1
    if base[0] == 0:
        k = max((1, 2), key=lambda t: base[t])
        base[k] -= 1
        base[0] = 1
    return base[0], base[1], base[2]


def select_indices(prev_perf, off_perf, off_crowd, psize, r1, r2, beta, gamma, rng):
    """Core of select_next on plain arrays.

    Returns (indices into prev, indices into offspring). ``off_crowd`` is the
    crowdingness of each offspring within the whole offspring set.
    """
    prev_perf = np.asarray(prev_perf)
    off_perf = np.asarray(off_perf)
    n1, n2, n3 = split_counts(psize, r1, r2)
    n1 = min(n1, len(prev_perf))
    best = int(np.argmax(prev_perf))
    others = [k for k in range(len(prev_perf)) if k != best]
    extra = rng.choice(others, size=min(n1 - 1, len(others)), replace=False) if n1 > 1 else []
    keep_prev = [best, *[int(k) for k in extra]]

    order = np.argsort(-off_perf, kind="stable")
    top = [int(k) for k in order[:n2]]
    rest = np.array([int(k) for k in order[n2:]], dtype=np.int64)
    chosen = []
    if n3 > 0 and rest.size:
        i = rank_desc(off_perf[rest])
        j = rank_asc(np.asarray(off_crowd)[rest])
        w = weight(i, j, beta, gamma)
        take = min(n3, rest.size)
        chosen = [int(k) for k in rng.choice(rest, size=take, replace=False, p=w / w.sum())]
    keep_off = top + chosen

    short = psize - len(keep_prev) - len(keep_off)
    if short > 0:
        left = [k for k in np.argsort(-prev_perf, kind="stable") if int(k) not in set(keep_prev)]
        keep_prev += [int(k) for k in left[:short]]
    return keep_prev, keep_off
