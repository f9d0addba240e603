"""Bucket elimination over rows, restricted to an arbitrary row domain.

With the full domain this is the exact solver; with the palindromic domain it
solves the symmetric relaxation; with the rows (and columns) of a few parent
boards it is the optimal recombination operator used by the memetic
algorithm.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .life_core import as_board, board_columns, board_from_rows, board_to_rows, reflect, row_mask
from .wcsp_row import INF, from_table

FULL_DOMAIN_CAP = 10


@dataclass(frozen=True)
class Domain:
    """Deduplicated, ascending list of admissible row values of width ``n``."""

    n: int
    values: tuple[int, ...]

    def __post_init__(self):
        if not self.values:
            raise ValueError("domain must not be empty")
        vals = tuple(sorted(set(int(v) for v in self.values)))
        if vals[0] < 0 or vals[-1] >> self.n:
            raise ValueError(f"domain values must fit width {self.n}")
        object.__setattr__(self, "values", vals)

    def __len__(self) -> int:
        return len(self.values)

    def array(self) -> np.ndarray:
        return np.asarray(self.values, dtype=np.int64)

    @classmethod
    def of(cls, n: int, values: Iterable[int]) -> "Domain":
        return cls(n, tuple(values))


@dataclass
class BESolution:
    opt: float
    board: np.ndarray | None
    stats: dict = field(default_factory=dict)

    @property
    def feasible(self) -> bool:
        return self.opt != INF


def full_domain(n: int, allow_large: bool = False) -> Domain:
    if n > FULL_DOMAIN_CAP and not allow_large:
        raise ValueError(
            f"full domain for n={n} has 2^{n} rows; pass allow_large=True to force it")
    return Domain(n, tuple(range(1 << n)))


def symmetric_domain(n: int) -> Domain:
    """Palindromic rows: every half-row OR its mirror image."""
    half = (n + 1) // 2
    return Domain(n, tuple(h | reflect(h, n) for h in range(1 << half)))


class _Model:
    """Dense row-cost structures for one domain (shared by both BE variants)."""

    def __init__(self, n: int, domain: Domain):
        if domain.n != n:
            raise ValueError(f"domain width {domain.n} != n={n}")
        self.n = n
        self.dom = domain.array()
        self.d = len(self.dom)
        full = row_mask(n)
        frame = 1 | 1 << (n - 1)
        self.indptr, self.indices = _kernels.triple_csr(self.dom, full, frame, full)
        self.dead = _kernels.dead_counts(self.dom, full)
        self.first = _kernels.edge_table(self.dom, full, full, True)   # (r1, r2)
        self.last = _kernels.edge_table(self.dom, full, full, False)   # (r_{n-1}, r_n)

    def backward(self, stop: int, keep: bool = True):
        """Tables g[i] for i = n+1 down to ``stop``.

        g[i][a, b] is the best cost of the row functions f_{i-1}..f_n given
        rows (i-2, i-1) = (a, b); g[n+1] is the last-row table itself.
        """
        tables = {self.n + 1: self.last}
        g = self.last
        evals = 0
        cells = 0
        for i in range(self.n, stop - 1, -1):
            g, e = _kernels.eliminate(self.indptr, self.indices, self.dead, g)
            evals += int(e)
            cells += self.d * self.d
            if keep:
                tables[i] = g
            else:
                tables = {i: g}
        return tables, {"table_cells": cells, "candidate_evals": evals,
                        "domain_size": self.d, "stable_triples": int(self.indptr[-1])}

    def forward(self, tables, ia: int, ib: int, start: int) -> list[int]:
        """Rows start..n by argmin given rows (start-2, start-1) at indices (ia, ib)."""
        out = []
        for i in range(start, self.n + 1):
            ic = int(_kernels.best_successor(self.indptr, self.indices, self.d, ia, ib,
                                             tables[i + 1]))
            out.append(ic)
            ia, ib = ib, ic
        return out


def be_solve(n: int, domain: Domain, return_board: bool = True) -> BESolution:
    """Exact optimum over boards whose rows all come from ``domain``.

    Rows are eliminated from the bottom; ties in the reconstruction go to the
    lowest domain index.  ``return_board=False`` keeps only the current
    table in memory and reports the cost alone.
    """
    if n < 3:
        raise ValueError("be_solve needs n >= 3; use oracle.exhaustive_opt for smaller boards")
    m = _Model(n, domain)
    tables, stats = m.backward(3, keep=return_board)
    g3 = tables[3]
    total = np.minimum(g3 + m.first, _kernels.INF_I)
    flat = int(np.argmin(total))
    opt = from_table(total.flat[flat])
    if opt == INF or not return_board:
        return BESolution(opt, None, stats)
    ia, ib = divmod(flat, m.d)
    idx = [ia, ib] + m.forward(tables, ia, ib, 3)
    rows = [int(m.dom[k]) for k in idx]
    return BESolution(opt, board_from_rows(rows, n), stats)


def be_solve_symmetric_opt(n: int, domain: Domain) -> BESolution:
    """Same optimum as :func:`be_solve`, eliminating only the bottom half.

    Turning a board upside down maps the row functions onto each other, so
    the table for the top half is the bottom-half table with its arguments
    swapped.  For even n = 2h the halves meet between rows h and h+1; for odd
    n = 2h+1 they share the middle row h+1 and are joined through the middle
    row function.
    """
    if n < 3:
        raise ValueError("be_solve_symmetric_opt needs n >= 3")
    m = _Model(n, domain)
    h = n // 2
    if n % 2 == 0:
        stop = h + 2
        tables, stats = m.backward(stop)
        g = tables[stop]
        total = np.minimum(g + g.T, _kernels.INF_I)
        flat = int(np.argmin(total))
        opt = from_table(total.flat[flat])
        if opt == INF:
            return BESolution(opt, None, stats)
        ix, iy = divmod(flat, m.d)
        # rows h, h+1 = x, y; the flipped board has rows h, h+1 = y, x
        bottom = m.forward(tables, ix, iy, stop)
        top = m.forward(tables, iy, ix, stop)
        idx = list(reversed(top)) + [ix, iy] + bottom
    else:
        stop = h + 3
        tables, stats = m.backward(stop)
        g = tables[stop]
        v, ix, iy, iz = _kernels.middle_join(m.indptr, m.indices, m.dead, g)
        opt = from_table(v)
        if opt == INF:
            return BESolution(opt, None, stats)
        bottom = m.forward(tables, iy, iz, stop)
        top = m.forward(tables, iy, ix, stop)
        idx = list(reversed(top)) + [ix, iy, iz] + bottom
    rows = [int(m.dom[k]) for k in idx]
    return BESolution(opt, board_from_rows(rows, n), stats)


def recombination_domain(parents: Sequence, use_columns: bool = True) -> Domain:
    boards = [as_board(p) for p in parents]
    if not boards:
        raise ValueError("need at least one parent")
    n = boards[0].shape[0]
    values: set[int] = set()
    for b in boards:
        if b.shape[0] != n:
            raise ValueError("parents must share the board size")
        values.update(board_to_rows(b))
        if use_columns:
            values.update(board_columns(b))
    return Domain(n, tuple(values))


def be_recombine(parents: Sequence, use_columns: bool = True) -> BESolution:
    """Best child buildable from the parents' rows (and columns)."""
    dom = recombination_domain(parents, use_columns)
    return be_solve(dom.n, dom)


def fmt_cost(cost) -> str:
    return "inf" if cost == INF or (isinstance(cost, float) and math.isinf(cost)) else str(cost)
