"""Compiled inner loops shared by the exact, bounding and local-search code.

Rows are plain ``int64`` bit fields (bit 0 = leftmost column).  Everything in
here works on whole rows with shifted-word arithmetic; the readable cell-level
definitions live in :mod:`stilllife.life_core` and the tests hold the two
against each other.
"""
from __future__ import annotations

import numpy as np
from numba import njit

# Integer infinity used inside dense tables.  Finite costs never exceed 32*32,
# so two saturated values can be added without leaving int64.
INF_I = 1 << 30


def row_unstable(a, b, c, full):
    """Mask of the columns whose cell in ``b`` is unstable given rows ``a``/``c``.

    Written so the same source runs as plain Python and under numba.
    """
    xs = (
        (a << 1) & full, a, (a >> 1),
        (b << 1) & full, (b >> 1),
        (c << 1) & full, c, (c >> 1),
    )
    ones = 0
    twos = 0
    fours = 0
    eights = 0
    for x in xs:
        carry = ones & x
        ones ^= x
        carry2 = twos & carry
        twos ^= carry
        carry4 = fours & carry2
        fours ^= carry2
        eights |= carry4
    low = ~fours & ~eights
    eq2 = ~ones & twos & low
    eq3 = ones & twos & low
    return ((b & ~(eq2 | eq3)) | (~b & eq3)) & full


_row_unstable = njit(cache=True)(row_unstable)


@njit(cache=True)
def popcount(x):
    cnt = 0
    while x:
        x &= x - 1
        cnt += 1
    return cnt


@njit(cache=True)
def _triple_ok(a, b, c, owned, frame, full):
    if _row_unstable(a, b, c, full) & owned:
        return False
    if a & b & c & frame:
        return False
    return True


@njit(cache=True)
def triple_csr(dom, owned, frame, full):
    """For every (a, b) domain pair, the sorted list of c that keep row b stable.

    ``owned`` restricts which columns of b are checked, ``frame`` selects the
    columns whose outer frame cell must not be born (a_j = b_j = c_j = 1).
    Returned as CSR arrays indexed by ``a * d + b``.
    """
    d = dom.shape[0]
    indptr = np.zeros(d * d + 1, dtype=np.int64)
    for ia in range(d):
        a = dom[ia]
        for ib in range(d):
            b = dom[ib]
            cnt = 0
            for ic in range(d):
                if _triple_ok(a, b, dom[ic], owned, frame, full):
                    cnt += 1
            indptr[ia * d + ib + 1] = cnt
    for k in range(d * d):
        indptr[k + 1] += indptr[k]
    indices = np.empty(indptr[d * d], dtype=np.int32)
    pos = 0
    for ia in range(d):
        a = dom[ia]
        for ib in range(d):
            b = dom[ib]
            for ic in range(d):
                if _triple_ok(a, b, dom[ic], owned, frame, full):
                    indices[pos] = ic
                    pos += 1
    return indptr, indices


@njit(cache=True)
def edge_table(dom, owned, full, first):
    """Cost table of the first (``first=True``) or last row function.

    The first-row table is indexed (b, c) with the row above fixed to the dead
    frame; the last-row table is indexed (a, b) with the frame below.  Both
    forbid three adjacent live owned cells in b (a frame birth).
    """
    d = dom.shape[0]
    out = np.empty((d, d), dtype=np.int64)
    for i in range(d):
        for j in range(d):
            if first:
                b = dom[i]
                u = _row_unstable(0, b, dom[j], full)
            else:
                b = dom[j]
                u = _row_unstable(dom[i], b, 0, full)
            run3 = b & ((b << 1) & full) & (b >> 1)
            if (u | run3) & owned:
                out[i, j] = INF_I
            else:
                out[i, j] = popcount(~b & owned)
    return out


@njit(cache=True)
def dead_counts(dom, owned):
    out = np.empty(dom.shape[0], dtype=np.int64)
    for i in range(dom.shape[0]):
        out[i] = popcount(~dom[i] & owned)
    return out


@njit(cache=True)
def eliminate(indptr, indices, dead, g_next):
    """One bucket: g[a, b] = dead[b] + min over stable c of g_next[b, c].

    Returns the new table and the number of candidate evaluations.
    """
    d = dead.shape[0]
    out = np.empty((d, d), dtype=np.int64)
    evals = 0
    for ia in range(d):
        for ib in range(d):
            k = ia * d + ib
            best = INF_I
            for p in range(indptr[k], indptr[k + 1]):
                v = g_next[ib, indices[p]]
                if v < best:
                    best = v
            evals += indptr[k + 1] - indptr[k]
            if best >= INF_I:
                out[ia, ib] = INF_I
            else:
                out[ia, ib] = best + dead[ib]
    return out, evals


@njit(cache=True)
def best_successor(indptr, indices, d, ia, ib, g_next):
    """Lowest-index c minimising g_next[b, c] among stable successors, or -1."""
    k = ia * d + ib
    best = INF_I
    arg = -1
    for p in range(indptr[k], indptr[k + 1]):
        v = g_next[ib, indices[p]]
        if v < best:
            best = v
            arg = indices[p]
    return arg


@njit(cache=True)
def middle_join(indptr, indices, dead, g):
    """Odd-size fold of the two half tables: min over stable (x, y, z) of
    g[y, x] + dead[y] + g[y, z].  Returns (value, ix, iy, iz)."""
    d = dead.shape[0]
    best = INF_I
    bx = -1
    by = -1
    bz = -1
    for ix in range(d):
        for iy in range(d):
            top = g[iy, ix]
            if top >= INF_I:
                continue
            k = ix * d + iy
            for p in range(indptr[k], indptr[k + 1]):
                iz = indices[p]
                bot = g[iy, iz]
                if bot >= INF_I:
                    continue
                v = top + dead[iy] + bot
                if v < best:
                    best = v
                    bx = ix
                    by = iy
                    bz = iz
    return best, bx, by, bz


@njit(cache=True)
def batch_row_cost(a, b, c, owned, frame, full, first_or_last):
    """Row cost for many (a, b, c) triples at once.

    ``first_or_last`` adds the no-three-adjacent check on b (used when a or
    c is the dead frame row).
    """
    m = b.shape[0]
    out = np.empty(m, dtype=np.int64)
    for k in range(m):
        bk = b[k]
        bad = _row_unstable(a[k], bk, c[k], full) & owned
        bad |= a[k] & bk & c[k] & frame
        if first_or_last:
            bad |= bk & ((bk << 1) & full) & (bk >> 1) & owned
        if bad:
            out[k] = INF_I
        else:
            out[k] = popcount(~bk & owned)
    return out


# ---------------------------------------------------------------------------
# penalised fitness and tabu search over an embedded cell array


@njit(cache=True)
def _penalty(alive, eta, kp):
    if alive:
        if eta < 2:
            return kp + 2 - eta
        if eta > 3:
            return kp + eta - 3
        return 0
    if eta == 3:
        return kp + 1
    return 0


@njit(cache=True)
def _embed_counts(cells):
    n = cells.shape[0]
    e = np.zeros((n + 2, n + 2), dtype=np.int64)
    for i in range(n):
        for j in range(n):
            e[i + 1, j + 1] = cells[i, j]
    eta = np.zeros((n + 2, n + 2), dtype=np.int64)
    for i in range(n + 2):
        for j in range(n + 2):
            s = 0
            for di in range(-1, 2):
                for dj in range(-1, 2):
                    if di == 0 and dj == 0:
                        continue
                    y = i + di
                    x = j + dj
                    if 0 <= y < n + 2 and 0 <= x < n + 2:
                        s += e[y, x]
            eta[i, j] = s
    return e, eta


@njit(cache=True)
def fitness_kernel(cells, k, kp):
    n = cells.shape[0]
    e, eta = _embed_counts(cells)
    dead = 0
    pen = 0
    for i in range(n + 2):
        for j in range(n + 2):
            pen += _penalty(e[i, j], eta[i, j], kp)
    for i in range(n):
        for j in range(n):
            dead += 1 - cells[i, j]
    return dead + k * pen


@njit(cache=True)
def _flip_delta(e, eta, i, j, k, df1, df2):
    c = e[i, j]
    s = df1[c, eta[i, j]]
    for di in range(-1, 2):
        for dj in range(-1, 2):
            if di == 0 and dj == 0:
                continue
            y = i + di
            x = j + dj
            s += df2[e[y, x], eta[y, x], c]
    # dead-cell term lives outside the K bracket
    return (1 if c == 1 else -1) + k * s


@njit(cache=True)
def tabu_kernel(cells, maxiter, tenures, k, df1, df2, kp):
    n = cells.shape[0]
    e, eta = _embed_counts(cells)
    fit = fitness_kernel(cells, k, kp)
    best_fit = fit
    best = cells.copy()
    expiry = np.zeros((n + 2, n + 2), dtype=np.int64)
    for it in range(maxiter):
        move_d = 0
        mi = -1
        mj = -1
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                dl = _flip_delta(e, eta, i, j, k, df1, df2)
                if expiry[i, j] > it and fit + dl >= best_fit:
                    continue
                if mi < 0 or dl < move_d:
                    move_d = dl
                    mi = i
                    mj = j
        if mi < 0:
            continue
        c = e[mi, mj]
        e[mi, mj] = 1 - c
        step = 1 if c == 0 else -1
        for di in range(-1, 2):
            for dj in range(-1, 2):
                if di == 0 and dj == 0:
                    continue
                eta[mi + di, mj + dj] += step
        fit += move_d
        expiry[mi, mj] = it + 1 + tenures[it]
        if fit < best_fit:
            best_fit = fit
            for y in range(n):
                for x in range(n):
                    best[y, x] = e[y + 1, x + 1]
    return best, best_fit
