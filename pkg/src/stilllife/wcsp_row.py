"""Row-encoded weighted CSP model of the still-life problem.

Each board row is one variable.  Three families of cost functions cover the
board: ``f1`` on the first two rows, ``fi`` on every window of three rows and
``fn_`` on the last two.  A stable window costs the number of dead cells in
its middle row; an unstable one costs :data:`INF`.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import _kernels
from .life_core import as_board, row_mask, zeroes

INF = math.inf
"""Cost of a forbidden assignment.  Absorbs under addition."""


def is_inf(cost) -> bool:
    return cost == INF


def from_table(v: int):
    """Convert a dense-table integer cost to the public representation."""
    v = int(v)
    return INF if v >= _kernels.INF_I else v


def _check(n: int, *rows: int) -> None:
    for r in rows:
        if r < 0 or r >> n:
            raise ValueError(f"row {r:#b} does not fit width {n}")


def _frame_birth_in_row(b: int, n: int) -> bool:
    full = row_mask(n)
    return bool(b & ((b << 1) & full) & (b >> 1))


def stable_triple(a: int, b: int, c: int, n: int) -> bool:
    """All cells of ``b`` are stable with ``a`` above and ``c`` below."""
    _check(n, a, b, c)
    return _kernels.row_unstable(a, b, c, row_mask(n)) == 0


def f1(b: int, c: int, n: int):
    _check(n, b, c)
    if not stable_triple(0, b, c, n) or _frame_birth_in_row(b, n):
        return INF
    return zeroes(b, n)


def fi(a: int, b: int, c: int, n: int):
    _check(n, a, b, c)
    edge = 1 | 1 << (n - 1)
    if not stable_triple(a, b, c, n) or a & b & c & edge:
        return INF
    return zeroes(b, n)


def fn_(a: int, b: int, n: int):
    _check(n, a, b)
    if not stable_triple(a, b, 0, n) or _frame_birth_in_row(b, n):
        return INF
    return zeroes(b, n)


def total_cost(board):
    """Sum of every row cost function; finite exactly for still lifes."""
    rows = [int(r) for r in _rows(board)]
    n = len(rows)
    if n == 1:
        # a single row is both the first and the last row
        r = rows[0]
        if _kernels.row_unstable(0, r, 0, 1) or _frame_birth_in_row(r, 1):
            return INF
        return zeroes(r, 1)
    cost = f1(rows[0], rows[1], n)
    for i in range(1, n - 1):
        cost += fi(rows[i - 1], rows[i], rows[i + 1], n)
    return cost + fn_(rows[n - 2], rows[n - 1], n)


def partial_cost(rows: Sequence[int], n: int):
    """Cost of the rows whose stability is already decided.

    With k rows assigned that is rows 1..k-1; row k still depends on the
    unassigned row below it.
    """
    k = len(rows)
    if k > n:
        raise ValueError(f"prefix of {k} rows for a board of {n}")
    if k <= 1:
        return 0
    cost = f1(rows[0], rows[1], n)
    for i in range(1, k - 1):
        cost += fi(rows[i - 1], rows[i], rows[i + 1], n)
    return cost


def _rows(board):
    if isinstance(board, np.ndarray) and board.ndim == 2:
        from .life_core import board_to_rows
        return board_to_rows(as_board(board))
    return list(board)


@dataclass(frozen=True)
class PartialSolution:
    """A prefix of assigned rows and its cached :func:`partial_cost`."""

    rows: tuple[int, ...]
    n: int
    cost: float = field(default=None, compare=False)  # type: ignore[assignment]

    def __post_init__(self):
        if self.cost is None:
            object.__setattr__(self, "cost", partial_cost(self.rows, self.n))

    @property
    def depth(self) -> int:
        return len(self.rows)

    def extend(self, row: int) -> "PartialSolution":
        rows = self.rows + (int(row),)
        k = len(rows)
        if k == 2:
            cost = f1(rows[0], rows[1], self.n)
        elif k > 2:
            cost = self.cost + fi(rows[-3], rows[-2], rows[-1], self.n)
        else:
            cost = 0
        return PartialSolution(rows, self.n, cost)
