"""Brute-force reference solvers used by the tests.

Nothing here shares code with the bit-sliced kernels: stability is decided
cell by cell on unpacked arrays via the Game-of-Life step, and enumeration is
plain.  Kept deliberately simple and slow.
"""
from __future__ import annotations

import itertools
import logging
from functools import lru_cache
from typing import Sequence

import numpy as np

from .life_core import as_board
from .wcsp_row import INF

log = logging.getLogger(__name__)

EXHAUSTIVE_CAP = 4
COMPLETION_CAP = 8


def _unpack(values: np.ndarray, n: int) -> np.ndarray:
    """int rows/boards -> bit arrays, last axis = column (or cell) index."""
    return ((values[..., None] >> np.arange(n)) & 1).astype(np.uint8)


def _step_fixed(boards: np.ndarray) -> np.ndarray:
    """Batch of (N, n, n) boards -> bool array: embedding unchanged by a step."""
    N, n, _ = boards.shape
    e = np.zeros((N, n + 4, n + 4), dtype=np.int8)
    e[:, 2:n + 2, 2:n + 2] = boards
    neigh = np.zeros((N, n + 2, n + 2), dtype=np.int8)
    for di in range(3):
        for dj in range(3):
            if di == 1 and dj == 1:
                continue
            neigh += e[:, di:di + n + 2, dj:dj + n + 2]
    cur = e[:, 1:n + 3, 1:n + 3]
    nxt = (neigh == 3) | ((cur == 1) & (neigh == 2))
    return (nxt == cur.astype(bool)).all(axis=(1, 2))


def exhaustive_opt(n: int, override: bool = False):
    """Fewest dead cells over all 2^(n*n) boards that are still lifes.

    Ties go to the smallest board integer (cell (i, j) is bit i*n + j).
    Returns ``(cost, board)``.
    """
    if n > EXHAUSTIVE_CAP and not override:
        raise ValueError(f"exhaustive_opt enumerates 2^{n * n} boards; n <= {EXHAUSTIVE_CAP}")
    total = 1 << (n * n)
    best, witness = INF, None
    chunk = 1 << 16
    for start in range(0, total, chunk):
        ids = np.arange(start, min(total, start + chunk), dtype=np.int64)
        boards = _unpack(ids, n * n).reshape(-1, n, n)
        ok = _step_fixed(boards)
        if not ok.any():
            continue
        dead = n * n - boards.reshape(len(ids), -1).sum(axis=1)
        dead = np.where(ok, dead, n * n + 1)
        k = int(np.argmin(dead))
        if dead[k] < best:
            best, witness = int(dead[k]), boards[k].copy()
    log.info("exhaustive_opt(n=%d): enumerated %d boards", n, total)
    return best, witness


def brute_force_domain(n: int, domain: Sequence[int], limit: int = 5_000_000):
    """Best still life whose rows all come from ``domain`` by plain enumeration.

    Returns ``(cost, board)``; ``(INF, None)`` when no assignment is stable.
    """
    vals = np.asarray(sorted(set(int(v) for v in domain)), dtype=np.int64)
    count = len(vals) ** n
    if count > limit:
        raise ValueError(f"{count} assignments exceed the enumeration limit {limit}")
    best, witness = INF, None
    combos = itertools.product(range(len(vals)), repeat=n)
    while True:
        block = np.fromiter(itertools.chain.from_iterable(itertools.islice(combos, 1 << 15)),
                            dtype=np.int64)
        if block.size == 0:
            break
        rows = vals[block.reshape(-1, n)]
        boards = _unpack(rows, n)
        ok = _step_fixed(boards)
        dead = np.where(ok, n * n - boards.reshape(len(rows), -1).sum(axis=1), n * n + 1)
        k = int(np.argmin(dead))
        if ok[k] and dead[k] < best:
            best, witness = int(dead[k]), boards[k].copy()
    log.info("brute_force_domain(n=%d, |D|=%d): enumerated %d boards", n, len(vals), count)
    return best, witness


@lru_cache(maxsize=8)
def _stability_tables(n: int):
    """Cell-level window checks over all rows of width n.

    ``mid[a, b, c]``: every cell of b stable and neither side frame cell born.
    ``top[b, c]`` / ``bot[a, b]``: the same for the first / last row,
    including the dead frame row beyond it.
    """
    d = 1 << n
    rows = _unpack(np.arange(d, dtype=np.int64), n).astype(np.int8)  # (d, n)
    pad = np.zeros((d, n + 2), dtype=np.int8)
    pad[:, 1:n + 1] = rows
    # horizontal 3-sums of each row at every column (including frame columns 0, n+1)
    p2 = np.zeros((d, n + 4), dtype=np.int8)
    p2[:, 2:n + 2] = rows
    h3 = p2[:, :-2] + p2[:, 1:-1] + p2[:, 2:]  # (d, n+2): columns 0..n+1 of the frame view
    hb = h3[:, 1:n + 1]
    b_cells = rows

    def ok_middle(sa, sc, with_side):
        # sa, sc: horizontal 3-sums (broadcast shapes) for the rows above/below at columns 1..n
        eta = sa + (hb - b_cells)[None, :, None, :] + sc
        alive = b_cells[None, :, None, :]
        stable = np.where(alive == 1, (eta == 2) | (eta == 3), eta != 3).all(axis=-1)
        if with_side is not None:
            stable &= with_side
        return stable

    mid = np.zeros((d, d, d), dtype=bool)
    for ia in range(d):
        sa = hb[ia][None, None, None, :]
        sc = hb[None, None, :, :]
        # frame cell left of b (column 0) has neighbours a1, b1, c1; right one an, bn, cn
        left = (rows[ia, 0] + rows[:, 0][:, None] + rows[:, 0][None, :]) == 3
        right = (rows[ia, -1] + rows[:, -1][:, None] + rows[:, -1][None, :]) == 3
        side = ~(left | right)
        mid[ia] = ok_middle(sa, sc, side[None])[0]
    zero = np.zeros((1, 1, 1, n), dtype=np.int8)
    # frame row above b: its cell at column j sees b_{j-1}, b_j, b_{j+1}
    no_birth = ~(h3 == 3).any(axis=1)
    top = ok_middle(zero, hb[None, None, :, :], None)[0] & no_birth[:, None]
    bot = ok_middle(hb[:, None, None, :], zero, None)[:, :, 0] & no_birth[None, :]
    return mid, top, bot


def exhaustive_best_completion(rows: Sequence[int], n: int, override: bool = False):
    """Cheapest total cost of any full board extending the given prefix.

    The search visits every completion row by row; a row is dropped as soon
    as it is provably unstable, and completions from the same two trailing
    rows are shared (the cost-to-go only depends on them).
    """
    if n > COMPLETION_CAP and not override:
        raise ValueError(f"best completion limited to n <= {COMPLETION_CAP}")
    if n < 3:
        raise ValueError("best completion needs n >= 3")
    rows = [int(r) for r in rows]
    k = len(rows)
    mid, top, bot = _stability_tables(n)
    dead = n - _unpack(np.arange(1 << n, dtype=np.int64), n).sum(axis=1).astype(np.int64)
    togo = _cost_to_go(n)
    if k == n:
        return _prefix_cost(rows, n, mid, top, bot, dead, full=True)
    if k <= 1:
        firsts = range(1 << n) if k == 0 else [rows[0]]
        best = INF
        for a in firsts:
            ok_b = np.nonzero(top[a])[0]
            if ok_b.size == 0:
                continue
            v = dead[a] + togo[3][a, ok_b]
            best = min(best, float(v.min()))
        return INF if best >= INF else int(best)
    base = _prefix_cost(rows, n, mid, top, bot, dead, full=False)
    if base == INF:
        return INF
    v = togo[k + 1][rows[-2], rows[-1]]
    return INF if v >= INF else int(base + v)


def best_completion_batch(prefixes, n: int, override: bool = False) -> np.ndarray:
    """:func:`exhaustive_best_completion` for an (N, k) array of prefixes.

    Returns a float array with ``INF`` where no completion is stable.
    """
    if n > COMPLETION_CAP and not override:
        raise ValueError(f"best completion limited to n <= {COMPLETION_CAP}")
    P = np.asarray(prefixes, dtype=np.int64)
    N, k = P.shape
    if k == 0:
        return np.full(N, float(exhaustive_best_completion([], n, override)))
    mid, top, bot = _stability_tables(n)
    dead = (n - _unpack(np.arange(1 << n, dtype=np.int64), n).sum(axis=1)).astype(float)
    togo = _cost_to_go(n)
    if k == 1:
        per_first = np.where(top, dead[:, None] + togo[3], INF).min(axis=1)
        return per_first[P[:, 0]]
    ok = top[P[:, 0], P[:, 1]].copy()
    cost = dead[P[:, 0]].copy()
    for i in range(1, k - 1):
        ok &= mid[P[:, i - 1], P[:, i], P[:, i + 1]]
        cost += dead[P[:, i]]
    if k == n:
        ok &= bot[P[:, -2], P[:, -1]]
        cost += dead[P[:, -1]]
    else:
        cost += togo[k + 1][P[:, -2], P[:, -1]]
    return np.where(ok, cost, INF)


def _prefix_cost(rows, n, mid, top, bot, dead, full):
    k = len(rows)
    if not top[rows[0], rows[1]]:
        return INF
    cost = int(dead[rows[0]])
    for i in range(1, k - 1):
        if not mid[rows[i - 1], rows[i], rows[i + 1]]:
            return INF
        cost += int(dead[rows[i]])
    if full:
        if not bot[rows[-2], rows[-1]]:
            return INF
        cost += int(dead[rows[-1]])
    return cost


@lru_cache(maxsize=8)
def _cost_to_go(n: int):
    """togo[i][a, b]: cheapest cost of rows i-1..n given rows (i-2, i-1) = (a, b)."""
    mid, top, bot = _stability_tables(n)
    dead = (n - _unpack(np.arange(1 << n, dtype=np.int64), n).sum(axis=1)).astype(float)
    togo = {n + 1: np.where(bot, dead[None, :], INF)}
    for i in range(n, 2, -1):
        nxt = togo[i + 1]
        # candidate c for window (a, b, c): cost dead[b] + nxt[b, c]
        cand = np.where(mid, nxt[None, :, :], INF).min(axis=2)
        togo[i] = cand + dead[None, :]
    return togo


def random_board(n: int, rng: np.random.Generator) -> np.ndarray:
    return rng.integers(0, 2, size=(n, n), dtype=np.uint8)


def board_id(board) -> int:
    b = as_board(board).astype(np.int64).ravel()
    return int((b << np.arange(b.size, dtype=np.int64)).sum())
