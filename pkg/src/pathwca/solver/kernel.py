"""Finite-domain search over linear integer rows.

Each row ``r`` stands for ``sum(coefs[k] * x[cols[k]]) + consts[r]  (op)  0``
with ``op`` one of LE/EQ/NE (0/1/2), stored in CSR form (``row_ptr``). The
search is bounds propagation to a fixpoint followed by depth-first splitting
on the smallest open domain: first ``x = lo``, then ``x >= lo + 1``. When a
short depth-first probe stalls, branch and bound takes over, discarding boxes
whose rational relaxation (a dense phase-1 simplex) has no solution.

Status codes: 1 sat, 0 unsat, -1 step budget exhausted.
"""
import numpy as np

from .._accel import jit

SAT, UNSAT, OUT_OF_BUDGET = 1, 0, -1


@jit
def _revise_le(start, end, sign, const, cols, coefs, lo, hi, changed, n):
    # sign * (sum a_k x_k + const) <= 0
    smin = sign * const
    for k in range(start, end):
        a = sign * coefs[k]
        v = cols[k]
        if a > 0:
            smin += a * lo[v]
        else:
            smin += a * hi[v]
    if smin > 0:
        return -1
    for k in range(start, end):
        a = sign * coefs[k]
        v = cols[k]
        if a > 0:
            # a*x <= -(smin - a*lo)
            ub = (a * lo[v] - smin) // a
            if ub < hi[v]:
                hi[v] = ub
                changed[n] = v
                n += 1
        else:
            # a*x <= -(smin - a*hi), a < 0  ->  x >= ceil((smin - a*hi) / -a)
            b = -a
            lb = -((a * hi[v] - smin) // b)
            if lb > lo[v]:
                lo[v] = lb
                changed[n] = v
                n += 1
        if lo[v] > hi[v]:
            return -1
    return n


@jit
def _revise(r, row_ptr, cols, coefs, consts, ops, lo, hi, changed):
    """Tighten bounds from row ``r``; number of changed vars or -1 on wipe-out."""
    start = row_ptr[r]
    end = row_ptr[r + 1]
    op = ops[r]
    if op == 0:
        return _revise_le(start, end, 1, consts[r], cols, coefs, lo, hi, changed, 0)
    if op == 1:
        n = _revise_le(start, end, 1, consts[r], cols, coefs, lo, hi, changed, 0)
        if n < 0:
            return n
        return _revise_le(start, end, -1, consts[r], cols, coefs, lo, hi, changed, n)
    # NE only prunes once a single variable is left open
    open_k = -1
    s = consts[r]
    for k in range(start, end):
        v = cols[k]
        if lo[v] == hi[v]:
            s += coefs[k] * lo[v]
        elif open_k >= 0:
            return 0
        else:
            open_k = k
    if open_k < 0:
        return -1 if s == 0 else 0
    a = coefs[open_k]
    v = cols[open_k]
    if s % a != 0:
        return 0
    bad = -(s // a)
    if bad == lo[v]:
        lo[v] += 1
    elif bad == hi[v]:
        hi[v] -= 1
    else:
        return 0
    changed[0] = v
    if lo[v] > hi[v]:
        return -1
    return 1


@jit
def _propagate(queue, qlen, inq, row_ptr, cols, coefs, consts, ops,
               occ_ptr, occ_rows, lo, hi, changed, steps, budget):
    """Run the row queue to a fixpoint. Returns (ok, steps); ok=-1 on budget."""
    head = 0
    nrows = inq.shape[0]
    while qlen > 0:
        r = queue[head]
        head += 1
        if head == nrows:
            head = 0
        qlen -= 1
        inq[r] = False
        steps += 1
        if steps > budget:
            return -1, steps
        n = _revise(r, row_ptr, cols, coefs, consts, ops, lo, hi, changed)
        if n < 0:
            # drain the queue so the next call starts clean
            for r2 in range(nrows):
                inq[r2] = False
            return 0, steps
        for t in range(n):
            v = changed[t]
            for k in range(occ_ptr[v], occ_ptr[v + 1]):
                r2 = occ_rows[k]
                if not inq[r2]:
                    inq[r2] = True
                    tail = head + qlen
                    if tail >= nrows:
                        tail -= nrows
                    queue[tail] = r2
                    qlen += 1
    return 1, steps


@jit
def _occurrences(row_ptr, cols, nrows, nvars):
    occ_cnt = np.zeros(nvars + 1, dtype=np.int64)
    for k in range(row_ptr[nrows]):
        occ_cnt[cols[k] + 1] += 1
    occ_ptr = np.cumsum(occ_cnt)
    fill = occ_ptr[:-1].copy()
    occ_rows = np.empty(max(row_ptr[nrows], 1), dtype=np.int64)
    for r in range(nrows):
        for k in range(row_ptr[r], row_ptr[r + 1]):
            v = cols[k]
            occ_rows[fill[v]] = r
            fill[v] += 1
    return occ_ptr, occ_rows


@jit
def _propagate_all(row_ptr, cols, coefs, consts, ops, nrows, occ_ptr, occ_rows,
                   lo, hi, queue, inq, changed, steps, budget):
    for r in range(nrows):
        queue[r] = r
        inq[r] = True
    return _propagate(queue, nrows, inq, row_ptr, cols, coefs, consts, ops,
                      occ_ptr, occ_rows, lo, hi, changed, steps, budget)


@jit
def _dfs(row_ptr, cols, coefs, consts, ops, nrows, occ_ptr, occ_rows,
         lo, hi, queue, inq, changed, steps, budget):
    """Depth-first search from a propagated box. Returns (status, steps)."""
    nvars = lo.shape[0]
    save_lo = np.empty((nvars + 1, nvars), dtype=np.int64)
    save_hi = np.empty((nvars + 1, nvars), dtype=np.int64)
    dvar = np.empty(nvars + 1, dtype=np.int64)
    dval = np.empty(nvars + 1, dtype=np.int64)
    depth = 0
    while True:
        # smallest open domain among constrained variables
        best = -1
        width = 0
        for v in range(nvars):
            if occ_ptr[v + 1] > occ_ptr[v] and hi[v] > lo[v]:
                w = hi[v] - lo[v]
                if best < 0 or w < width:
                    best = v
                    width = w
        if best < 0:
            return 1, steps
        save_lo[depth, :] = lo
        save_hi[depth, :] = hi
        dvar[depth] = best
        dval[depth] = lo[best]
        hi[best] = lo[best]
        depth += 1
        x = best
        while True:
            qlen = 0
            for k in range(occ_ptr[x], occ_ptr[x + 1]):
                r = occ_rows[k]
                if not inq[r]:
                    inq[r] = True
                    queue[qlen] = r
                    qlen += 1
            ok, steps = _propagate(queue, qlen, inq, row_ptr, cols, coefs, consts, ops,
                                   occ_ptr, occ_rows, lo, hi, changed, steps, budget)
            if ok == -1:
                return -1, steps
            if ok == 1:
                break
            # backtrack to the nearest level whose right branch is still open
            found = False
            while depth > 0:
                depth -= 1
                lo[:] = save_lo[depth, :]
                hi[:] = save_hi[depth, :]
                x = dvar[depth]
                lo[x] = dval[depth] + 1
                if lo[x] <= hi[x]:
                    found = True
                    break
            if not found:
                return 0, steps


@jit
def lp_relaxation(row_ptr, cols, coefs, consts, ops, nrows, lo, hi, max_pivots):
    """Phase-1 simplex on the rational relaxation of the LE/EQ rows over the box.

    Returns ``(status, x, pivots)`` with status 1 feasible (``x`` a feasible
    point), 0 infeasible, -1 undecided within ``max_pivots``.
    """
    nvars = lo.shape[0]
    x = np.empty(nvars, dtype=np.float64)
    for v in range(nvars):
        x[v] = lo[v]
    col = np.full(nvars, -1, dtype=np.int64)
    na = 0
    for r in range(nrows):
        if ops[r] == 2:
            continue
        for k in range(row_ptr[r], row_ptr[r + 1]):
            v = cols[k]
            if hi[v] > lo[v] and col[v] < 0:
                col[v] = na
                na += 1
    avar = np.empty(na, dtype=np.int64)
    for v in range(nvars):
        if col[v] >= 0:
            avar[col[v]] = v

    # collect rows in shifted form  a.y (<=|=) b  over y = x - lo
    nlp = 0
    nle = 0
    for r in range(nrows):
        if ops[r] != 2:
            nlp += 1
            if ops[r] == 0:
                nle += 1
    rhs = np.empty(nlp, dtype=np.float64)
    kind = np.empty(nlp, dtype=np.int64)
    dense = np.zeros((nlp, na), dtype=np.float64)
    i = 0
    for r in range(nrows):
        if ops[r] == 2:
            continue
        b = -consts[r]
        for k in range(row_ptr[r], row_ptr[r + 1]):
            v = cols[k]
            b -= coefs[k] * lo[v]
            if col[v] >= 0:
                dense[i, col[v]] += coefs[k]
        rhs[i] = b
        kind[i] = ops[r]
        i += 1

    m = nlp + na
    nart = 0
    for i in range(nlp):
        if kind[i] == 1 or rhs[i] < 0:
            nart += 1
    ncols = na + nle + na + nart
    T = np.zeros((m + 1, ncols + 1), dtype=np.float64)
    basis = np.empty(m, dtype=np.int64)
    is_art = np.zeros(ncols, dtype=np.bool_)
    s_le = na
    s_ub = na + nle
    s_art = na + nle + na
    le_i = 0
    art_i = 0
    for i in range(nlp):
        sign = 1.0
        if rhs[i] < 0:
            sign = -1.0
        for j in range(na):
            T[i, j] = sign * dense[i, j]
        T[i, ncols] = sign * rhs[i]
        if kind[i] == 0:
            T[i, s_le + le_i] = sign
            if sign > 0:
                basis[i] = s_le + le_i
            le_i += 1
        if kind[i] == 1 or sign < 0:
            c = s_art + art_i
            T[i, c] = 1.0
            is_art[c] = True
            basis[i] = c
            art_i += 1
    for j in range(na):
        i = nlp + j
        v = avar[j]
        T[i, j] = 1.0
        T[i, s_ub + j] = 1.0
        T[i, ncols] = hi[v] - lo[v]
        basis[i] = s_ub + j
    # phase-1 reduced costs
    for i in range(m):
        if is_art[basis[i]]:
            for j in range(ncols + 1):
                T[m, j] -= T[i, j]
    for j in range(ncols):
        if is_art[j]:
            T[m, j] += 1.0

    eps = 1e-9
    pivots = 0
    while True:
        e = -1
        best = -eps
        for j in range(ncols):
            if T[m, j] < best:
                best = T[m, j]
                e = j
        if e < 0:
            break
        if pivots >= max_pivots:
            return -1, x, pivots
        leave = -1
        ratio = 0.0
        for i in range(m):
            a = T[i, e]
            if a > eps:
                t = T[i, ncols] / a
                if leave < 0 or t < ratio - 1e-12 or (t <= ratio + 1e-12 and basis[i] < basis[leave]):
                    leave = i
                    ratio = t
        if leave < 0:
            return -1, x, pivots
        p = T[leave, e]
        for j in range(ncols + 1):
            T[leave, j] /= p
        for i in range(m + 1):
            if i != leave:
                f = T[i, e]
                if f != 0.0:
                    for j in range(ncols + 1):
                        T[i, j] -= f * T[leave, j]
        basis[leave] = e
        pivots += 1
    # objective value is -T[m, ncols]
    if -T[m, ncols] > 1e-6:
        return 0, x, pivots
    for i in range(m):
        if basis[i] < na:
            x[avar[basis[i]]] = lo[avar[basis[i]]] + T[i, ncols]
    return 1, x, pivots


@jit
def _rows_hold(row_ptr, cols, coefs, consts, ops, nrows, val):
    """Index of the first violated row under ``val``, or -1."""
    for r in range(nrows):
        s = consts[r]
        for k in range(row_ptr[r], row_ptr[r + 1]):
            s += coefs[k] * val[cols[k]]
        op = ops[r]
        if (op == 0 and s > 0) or (op == 1 and s != 0) or (op == 2 and s == 0):
            return r
    return -1


@jit
def solve(row_ptr, cols, coefs, consts, ops, nrows, lo0, hi0, budget, probe):
    """Decide the rows over the box ``[lo0, hi0]``.

    Bounds propagation and a depth-first probe of ``probe`` steps come first;
    if that does not settle the question the search continues as branch and
    bound, pruning boxes whose rational relaxation is infeasible.

    Returns ``(status, steps, model)``; ``model`` is meaningful only when
    status is SAT. Variables not mentioned in any row take their lower bound.
    """
    nvars = lo0.shape[0]
    lo = lo0.copy()
    hi = hi0.copy()
    for v in range(nvars):
        if lo[v] > hi[v]:
            return 0, 0, lo
    occ_ptr, occ_rows = _occurrences(row_ptr, cols, nrows, nvars)
    queue = np.empty(max(nrows, 1), dtype=np.int64)
    inq = np.zeros(max(nrows, 1), dtype=np.bool_)
    changed = np.empty(2 * nvars + 2, dtype=np.int64)
    ok, steps = _propagate_all(row_ptr, cols, coefs, consts, ops, nrows, occ_ptr, occ_rows,
                               lo, hi, queue, inq, changed, 0, budget)
    if ok != 1:
        return ok, steps, lo
    blo = lo.copy()
    bhi = hi.copy()
    status, steps = _dfs(row_ptr, cols, coefs, consts, ops, nrows, occ_ptr, occ_rows,
                         lo, hi, queue, inq, changed, steps, min(budget, steps + probe))
    if status != -1 or steps >= budget:
        return status, steps, lo

    # branch and bound over boxes, depth first
    cap = 64
    st_lo = np.empty((cap, nvars), dtype=np.int64)
    st_hi = np.empty((cap, nvars), dtype=np.int64)
    st_lo[0, :] = blo
    st_hi[0, :] = bhi
    top = 1
    val = np.empty(nvars, dtype=np.int64)
    while top > 0:
        top -= 1
        lo[:] = st_lo[top, :]
        hi[:] = st_hi[top, :]
        ok, steps = _propagate_all(row_ptr, cols, coefs, consts, ops, nrows, occ_ptr, occ_rows,
                                   lo, hi, queue, inq, changed, steps, budget)
        if ok == -1:
            return -1, steps, lo
        if ok == 0:
            continue
        lp, x, piv = lp_relaxation(row_ptr, cols, coefs, consts, ops, nrows, lo, hi, 20 * (nvars + nrows) + 100)
        steps += piv + 1
        if steps > budget:
            return -1, steps, lo
        if lp == 0:
            continue
        # choose a branching variable and value
        bv = -1
        split_lo = 0
        split_hi = 0
        three = False
        if lp == 1:
            frac_best = 1e-6
            for v in range(nvars):
                if hi[v] > lo[v] and occ_ptr[v + 1] > occ_ptr[v]:
                    f = x[v] - np.floor(x[v])
                    d = min(f, 1.0 - f)
                    if d > frac_best:
                        frac_best = d
                        bv = v
            if bv >= 0:
                split_lo = np.int64(np.floor(x[bv]))
                split_hi = split_lo + 1
            else:
                for v in range(nvars):
                    val[v] = np.int64(np.floor(x[v] + 0.5))
                    if val[v] < lo[v]:
                        val[v] = lo[v]
                    if val[v] > hi[v]:
                        val[v] = hi[v]
                bad = _rows_hold(row_ptr, cols, coefs, consts, ops, nrows, val)
                if bad < 0:
                    return 1, steps, val
                for k in range(row_ptr[bad], row_ptr[bad + 1]):
                    v = cols[k]
                    if hi[v] > lo[v]:
                        bv = v
                        break
                if bv < 0:
                    continue
                three = True
                split_lo = val[bv]
        if bv < 0:
            # relaxation undecided: plain split on the smallest open domain
            width = 0
            for v in range(nvars):
                if occ_ptr[v + 1] > occ_ptr[v] and hi[v] > lo[v]:
                    w = hi[v] - lo[v]
                    if bv < 0 or w < width:
                        bv = v
                        width = w
            if bv < 0:
                return 1, steps, lo
            split_lo = lo[bv]
            split_hi = lo[bv] + 1
        if top + 3 > cap:
            cap *= 2
            n_lo = np.empty((cap, nvars), dtype=np.int64)
            n_hi = np.empty((cap, nvars), dtype=np.int64)
            n_lo[:top, :] = st_lo[:top, :]
            n_hi[:top, :] = st_hi[:top, :]
            st_lo = n_lo
            st_hi = n_hi
        if three:
            v0 = split_lo
            if v0 + 1 <= hi[bv]:
                st_lo[top, :] = lo
                st_hi[top, :] = hi
                st_lo[top, bv] = v0 + 1
                top += 1
            if v0 - 1 >= lo[bv]:
                st_lo[top, :] = lo
                st_hi[top, :] = hi
                st_hi[top, bv] = v0 - 1
                top += 1
            st_lo[top, :] = lo
            st_hi[top, :] = hi
            st_lo[top, bv] = v0
            st_hi[top, bv] = v0
            top += 1
        else:
            # explore the side nearer the relaxed value first (pushed last)
            up_first = lp == 1 and x[bv] - split_lo >= 0.5
            for side in range(2):
                take_up = (side == 1) != up_first
                st_lo[top, :] = lo
                st_hi[top, :] = hi
                if take_up:
                    st_lo[top, bv] = split_hi
                else:
                    st_hi[top, bv] = split_lo
                top += 1
    return 0, steps, lo


@jit
def prefix_crowding(bits, used):
    """Pairwise sum of LCP(q, q') / sqrt(m * m') over rows of ``bits``."""
    n = bits.shape[0]
    out = np.zeros(n, dtype=np.float64)
    for i in range(n):
        mi = used[i]
        for j in range(i + 1, n):
            mj = used[j]
            if mi == 0 and mj == 0:
                s = 1.0
            elif mi == 0 or mj == 0:
                s = 0.0
            else:
                lim = min(mi, mj)
                l = 0
                while l < lim and bits[i, l] == bits[j, l]:
                    l += 1
                s = l / np.sqrt(mi * mj)
            out[i] += s
            out[j] += s
    return out


@jit
def hamming_crowding(vals):
    """Pairwise sum of 1 - hamming(v, v') / L over rows of ``vals``."""
    n = vals.shape[0]
    length = vals.shape[1]
    out = np.zeros(n, dtype=np.float64)
    for i in range(n):
        for j in range(i + 1, n):
            if length == 0:
                s = 1.0
            else:
                d = 0
                for k in range(length):
                    if vals[i, k] != vals[j, k]:
                        d += 1
                s = 1.0 - d / length
            out[i] += s
            out[j] += s
    return out


def prefix_crowding_numpy(bits, used):
    """Vectorized twin of ``prefix_crowding`` (quadratic memory in the pool size)."""
    bits = np.asarray(bits)
    used = np.asarray(used, dtype=np.int64)
    n, width = bits.shape
    if n == 0:
        return np.zeros(0)
    diff = bits[:, None, :] != bits[None, :, :]
    any_diff = diff.any(axis=2)
    first = np.where(any_diff, diff.argmax(axis=2), width)
    lcp = np.minimum(first, np.minimum.outer(used, used)).astype(np.float64)
    prod = np.outer(used, used).astype(np.float64)
    with np.errstate(divide="ignore", invalid="ignore"):
        sim = np.where(prod > 0, lcp / np.sqrt(prod), 0.0)
    both_zero = (used[:, None] == 0) & (used[None, :] == 0)
    sim[both_zero] = 1.0
    np.fill_diagonal(sim, 0.0)
    return sim.sum(axis=1)


def hamming_crowding_numpy(vals):
    vals = np.asarray(vals)
    n, length = vals.shape
    if length == 0:
        out = np.full(n, float(n - 1))
        return out
    d = (vals[:, None, :] != vals[None, :, :]).sum(axis=2)
    sim = 1.0 - d / length
    np.fill_diagonal(sim, 0.0)
    return sim.sum(axis=1)


def crowding_functions():
    """(prefix, hamming) implementations for the active backend."""
    from .._accel import HAS_NUMBA

    if HAS_NUMBA:
        return prefix_crowding, hamming_crowding
    return prefix_crowding_numpy, hamming_crowding_numpy
