"""Beam search over symmetric rows, interleaved with the memetic algorithm.

The beam grows boards row by row from the top, branching only on palindromic
rows.  Once the depth reaches ``ceil(k_ma_fraction * n)`` every level also
seeds an MA population from the best nodes of the level (completed with
random rows) and folds the MA result into the incumbent.
"""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .life_core import board_from_rows, reflect, row_mask
from .memetic import Individual, MAConfig, TraceEvent, ma_run
from .minibucket import MBTables, batch_bounds, cached_tables
from .wcsp_row import INF, PartialSolution, from_table, total_cost

log = logging.getLogger(__name__)

BOUNDS = ("simple", "minibucket")


class SearchExhausted(Exception):
    """No candidate node is left to select from."""


@dataclass
class Beam:
    """Nodes of one level: ``rows[j]`` is node j's prefix, sorted by ``bounds``."""

    rows: np.ndarray      # (size, depth) int64
    costs: np.ndarray     # partial_cost, INF_I when infinite
    bounds: np.ndarray
    all_infinite: bool = False

    def __len__(self) -> int:
        return self.rows.shape[0]

    @property
    def depth(self) -> int:
        return self.rows.shape[1]

    def nodes(self, n: int) -> list[PartialSolution]:
        return [PartialSolution(tuple(int(r) for r in row), n, from_table(c))
                for row, c in zip(self.rows, self.costs)]


@dataclass
class HybridConfig:
    n: int
    k_bw: int = 2000
    k_ma_fraction: float = 0.75
    bound: str = "minibucket"
    M: int = 3
    ma: MAConfig | None = None
    ma_generations: int = 1000
    seed: int = 0
    target: int | None = None       # stop once the incumbent reaches this
    table_cache: str | None = None  # directory for mini-bucket tables
    use_ma: bool = True

    def __post_init__(self):
        self.bound = {"mb": "minibucket"}.get(self.bound, self.bound)
        if self.bound not in BOUNDS:
            raise ValueError(f"bound must be one of {BOUNDS}, got {self.bound!r}")
        if not 0 < self.k_ma_fraction <= 1:
            raise ValueError("k_ma_fraction must lie in (0, 1]")
        if self.ma is None:
            self.ma = MAConfig(n=self.n, arity=4 if self.bound == "minibucket" else 2)
        if self.ma.n != self.n:
            raise ValueError("MA config built for another board size")
        if self.k_bw < self.ma.popsize:
            raise ValueError("k_bw must be at least the MA population size")

    @property
    def k_ma(self) -> int:
        return math.ceil(self.k_ma_fraction * self.n)


def symmetric_rows(n: int) -> np.ndarray:
    """Palindromic rows ordered by their half-row index."""
    half = (n + 1) // 2
    return np.array([h | reflect(h, n) for h in range(1 << half)], dtype=np.int64)


def extend_symmetric(partial: PartialSolution, n: int | None = None) -> list[PartialSolution]:
    """Children of ``partial``: one per palindromic row appended."""
    n = partial.n if n is None else n
    if partial.depth >= n:
        raise ValueError("cannot extend a complete board")
    return [partial.extend(int(r)) for r in symmetric_rows(n)]


def select_beam(rows: np.ndarray, costs: np.ndarray, bounds: np.ndarray, k_bw: int) -> Beam:
    """The ``k_bw`` candidates with the smallest bound.

    Ties go to the lexicographically smaller row sequence.  Infinite bounds
    sort last, so such nodes only fill places no finite node claims.
    """
    if rows.shape[0] == 0:
        raise SearchExhausted("no candidates left")
    keys = [rows[:, j] for j in range(rows.shape[1] - 1, -1, -1)] + [bounds]
    order = np.lexsort(keys)[:k_bw]
    sel = bounds[order]
    return Beam(rows[order], costs[order], sel, bool(sel[0] >= _kernels.INF_I))


def complete_randomly(partial, n: int, rng: np.random.Generator) -> np.ndarray:
    """Board with the given prefix rows and uniformly random remaining rows."""
    prefix = list(partial.rows) if isinstance(partial, PartialSolution) else [int(r) for r in partial]
    if len(prefix) > n:
        raise ValueError("prefix longer than the board")
    rest = rng.integers(0, 1 << n, size=n - len(prefix), dtype=np.int64)
    return board_from_rows(prefix + [int(r) for r in rest], n)


def _expand(beam_rows: np.ndarray, beam_costs: np.ndarray, sym: np.ndarray, n: int):
    """All children of a level with their updated partial costs."""
    p, s = beam_rows.shape[0], sym.shape[0]
    depth = beam_rows.shape[1] + 1
    rows = np.empty((p * s, depth), dtype=np.int64)
    rows[:, :-1] = np.repeat(beam_rows, s, axis=0)
    rows[:, -1] = np.tile(sym, p)
    parent = np.repeat(beam_costs, s)
    full = row_mask(n)
    if depth < 2:
        return rows, parent.copy()
    if depth == 2:
        zero = np.zeros(rows.shape[0], dtype=np.int64)
        step = _kernels.batch_row_cost(zero, rows[:, 0], rows[:, 1], full, 0, full, True)
    else:
        frame = 1 | 1 << (n - 1)
        step = _kernels.batch_row_cost(rows[:, -3], rows[:, -2], rows[:, -1],
                                       full, frame, full, False)
    return rows, np.minimum(parent + step, _kernels.INF_I)


def _bounds(cfg: HybridConfig, tables: MBTables | None, rows, costs):
    if cfg.bound == "simple" or rows.shape[1] < 2:
        return costs
    return batch_bounds(tables, rows[:, -2], rows[:, -1], costs, rows.shape[1])


def _seed_boards(rows: np.ndarray, count: int, n: int, rng) -> list[np.ndarray]:
    boards, seen = [], set()
    for prefix in rows[:count]:
        for _ in range(100):
            b = complete_randomly(prefix, n, rng)
            if b.tobytes() not in seen:
                break
        seen.add(b.tobytes())
        boards.append(b)
    return boards


def beam_search(n: int, k_bw: int, bound: str = "simple", tables: MBTables | None = None,
                keep_infeasible: bool = True):
    """Beam search alone; returns the cheapest complete board of the last level.

    ``keep_infeasible=False`` drops nodes with an infinite bound outright,
    which lets a very wide beam stay small on tiny boards.
    """
    cfg = HybridConfig(n=n, k_bw=max(k_bw, 100), bound=bound, use_ma=False)
    if bound == "minibucket" and tables is None:
        tables = cached_tables(n, min(cfg.M, n // 2))
    best, board, _ = _beam_levels(cfg, tables, k_bw, keep_infeasible)
    return best, board


def _beam_levels(cfg, tables, k_bw, keep_infeasible, on_level=None):
    n = cfg.n
    sym = symmetric_rows(n)
    rows = np.zeros((1, 0), dtype=np.int64)
    costs = np.zeros(1, dtype=np.int64)
    for depth in range(1, n + 1):
        crows, ccosts = _expand(rows, costs, sym, n)
        cb = _bounds(cfg, tables, crows, ccosts)
        if not keep_infeasible:
            ok = cb < _kernels.INF_I
            crows, ccosts, cb = crows[ok], ccosts[ok], cb[ok]
        beam = select_beam(crows, ccosts, cb, k_bw)
        if beam.all_infinite:
            log.warning("level %d: every candidate has an infinite bound", depth)
        if on_level is not None:
            on_level(depth, crows, cb, beam)
        rows, costs = beam.rows, beam.costs
    best, board = _best_complete(rows, n)
    return best, board, rows


def _best_complete(rows: np.ndarray, n: int):
    """Cheapest still life among complete prefixes, ``(INF, None)`` if none."""
    best, board = INF, None
    for prefix in rows:
        c = total_cost([int(r) for r in prefix])
        if c < best:
            best, board = c, board_from_rows([int(r) for r in prefix], n)
    return best, board


def hybrid_run(config: HybridConfig, clock=time.monotonic):
    """Interleaved beam search and MA; returns ``(best, trace, info)``.

    ``best`` is an :class:`Individual` (fitness equals the dead-cell count
    when feasible).  The trace holds incumbent improvements with the level
    in the ``generation`` slot.
    """
    cfg = config
    n = cfg.n
    t0 = clock()
    tables = cached_tables(n, cfg.M, cfg.table_cache) if cfg.bound == "minibucket" else None
    level_seeds = np.random.SeedSequence(cfg.seed).spawn(n + 1)
    ma_cfg = cfg.ma.with_(generations=cfg.ma_generations, time_limit=None, target=cfg.target)
    incumbent: Individual | None = None
    trace: list[TraceEvent] = []
    info = {"ma_runs": 0, "levels": 0, "stopped_early": False}

    def consider(ind: Individual, level: int):
        nonlocal incumbent
        if incumbent is None or ind.fit < incumbent.fit:
            incumbent = ind
            trace.append(TraceEvent(clock() - t0, level, ind.fit))

    def reached() -> bool:
        return cfg.target is not None and incumbent is not None and incumbent.fit <= cfg.target

    sym = symmetric_rows(n)
    rows = np.zeros((1, 0), dtype=np.int64)
    costs = np.zeros(1, dtype=np.int64)
    for depth in range(1, n + 1):
        info["levels"] = depth
        crows, ccosts = _expand(rows, costs, sym, n)
        cb = _bounds(cfg, tables, crows, ccosts)
        beam = select_beam(crows, ccosts, cb, cfg.k_bw)
        if beam.all_infinite:
            log.warning("level %d: every candidate has an infinite bound", depth)
        if cfg.use_ma and depth >= cfg.k_ma:
            rng = np.random.default_rng(level_seeds[depth])
            # the selected beam is the sorted prefix of B', so its head is B''s best
            seeds = _seed_boards(beam.rows, cfg.ma.popsize, n, rng)
            best, _, _ = ma_run(ma_cfg, initial=seeds, rng=rng, clock=clock)
            info["ma_runs"] += 1
            consider(best, depth)
            log.info("level %d: MA best %d", depth, best.fit)
        rows, costs = beam.rows, beam.costs
        if reached():
            info["stopped_early"] = depth < n
            break
    if not reached() and rows.shape[1] == n:
        cost, board = _best_complete(rows, n)
        if board is not None:
            consider(Individual.evaluate(board), n)
    info["elapsed"] = clock() - t0
    return incumbent, trace, info
