"""Steady-state memetic algorithm with tabu search and BE recombination.

Variants (``MAConfig.variant``):

``TS``
    blind two-dimensional single-point crossover, mutation afterwards.
``BE``
    parents are mutated, then always recombined optimally with bucket
    elimination.
``BE_1F`` / ``BE_2F``
    like ``BE`` but only when at least one / every parent is feasible;
    otherwise the blind crossover is used.
"""
from __future__ import annotations

import math
import time
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .bucket_elim import be_recombine
from .life_core import as_board, delta_tables, fast_fitness, is_feasible_fitness, penalty_constants
from .oracle import random_board
from .wcsp_row import INF

VARIANTS = ("TS", "BE", "BE_1F", "BE_2F")


@dataclass
class Individual:
    board: np.ndarray
    fit: int

    @property
    def key(self) -> bytes:
        return self.board.tobytes()

    @property
    def feasible(self) -> bool:
        return is_feasible_fitness(self.fit, self.board.shape[0])

    @classmethod
    def evaluate(cls, board) -> "Individual":
        b = as_board(board)
        return cls(b, fast_fitness(b))


@dataclass
class MAConfig:
    n: int
    popsize: int = 100
    p_x: float = 0.9
    p_m: float | None = None          # default 1 / n^2
    arity: int = 2
    variant: str = "BE"
    use_columns: bool = True
    maxiter_ts: int | None = None     # default n^2
    time_limit: float | None = None   # seconds
    generations: int | None = None    # offspring insertions attempted
    target: int | None = None         # stop once the best fitness reaches this
    seed: int = 0
    debug: bool = False

    def __post_init__(self):
        self.variant = self.variant.upper()
        if self.variant not in VARIANTS:
            raise ValueError(f"variant must be one of {VARIANTS}, got {self.variant!r}")
        if self.p_m is None:
            self.p_m = 1.0 / (self.n * self.n)
        if self.maxiter_ts is None:
            self.maxiter_ts = self.n * self.n
        if not 0 <= self.p_x <= 1 or not 0 <= self.p_m <= 1:
            raise ValueError("probabilities must lie in [0, 1]")
        if self.popsize < 2:
            raise ValueError("binary tournament needs popsize >= 2")
        if self.arity < 2:
            raise ValueError("arity must be at least 2")

    def with_(self, **kw) -> "MAConfig":
        return replace(self, **kw)


@dataclass
class Population:
    """Individuals with distinct boards."""

    members: list[Individual] = field(default_factory=list)
    keys: set[bytes] = field(default_factory=set)

    def __len__(self) -> int:
        return len(self.members)

    def __getitem__(self, i: int) -> Individual:
        return self.members[i]

    def __contains__(self, ind: Individual) -> bool:
        return ind.key in self.keys

    def add(self, ind: Individual) -> bool:
        if ind.key in self.keys:
            return False
        self.members.append(ind)
        self.keys.add(ind.key)
        return True

    def worst_index(self) -> int:
        return int(np.argmax([m.fit for m in self.members]))

    def best(self) -> Individual:
        return min(self.members, key=lambda m: m.fit)

    def replace_worst(self, ind: Individual) -> bool:
        """Steady-state replacement; returns whether ``ind`` entered."""
        if ind.key in self.keys:
            return False
        w = self.worst_index()
        if ind.fit >= self.members[w].fit:
            return False
        self.keys.discard(self.members[w].key)
        self.members[w] = ind
        self.keys.add(ind.key)
        return True


@dataclass
class TraceEvent:
    time: float
    generation: int
    cost: int


def tenure_bounds(n: int) -> tuple[int, int]:
    return math.floor(n / 2 + 0.5), math.floor(3 * n / 2 + 0.5)


_TABLE_CACHE: dict[int, tuple] = {}


def _constants(n: int):
    if n not in _TABLE_CACHE:
        k, kp = penalty_constants(n)
        df1, df2 = delta_tables(kp)
        _TABLE_CACHE[n] = (k, kp, df1, df2)
    return _TABLE_CACHE[n]


def local_search(board, maxiter: int, rng: np.random.Generator) -> tuple[np.ndarray, int]:
    """Tabu search over single-cell flips; returns (best board seen, its fitness)."""
    b = as_board(board)
    n = b.shape[0]
    k, kp, df1, df2 = _constants(n)
    lo, hi = tenure_bounds(n)
    tenures = rng.integers(lo, hi + 1, size=max(maxiter, 0))
    best, fit = _kernels.tabu_kernel(np.ascontiguousarray(b), int(maxiter), tenures,
                                     k, df1, df2, kp)
    return best.astype(np.uint8), int(fit)


def tabu_search(board, maxiter: int, rng: np.random.Generator) -> np.ndarray:
    """Best board seen by ``maxiter`` iterations of tabu search.

    Each iteration scans all n^2 flips and takes the best one that is not
    tabu, or a tabu one that beats the best fitness of this run.  A flipped
    cell stays tabu for a tenure drawn uniformly from [n/2, 3n/2].
    """
    return local_search(board, maxiter, rng)[0]


def mutate(board, p_m: float, rng: np.random.Generator) -> np.ndarray:
    b = as_board(board)
    return b ^ (rng.random(b.shape) < p_m).astype(np.uint8)


def blind_2dspx(x, y, rng: np.random.Generator) -> np.ndarray:
    """Two-dimensional single-point crossover.

    A random cut (row r, column c) splits both boards in quadrants; the child
    keeps x's top-left and bottom-right blocks and y's other two.
    """
    x, y = as_board(x), as_board(y)
    if x.shape != y.shape:
        raise ValueError("parents must have the same size")
    n = x.shape[0]
    r = int(rng.integers(0, n + 1))
    c = int(rng.integers(0, n + 1))
    return crossover_at(x, y, r, c)


def crossover_at(x, y, r: int, c: int) -> np.ndarray:
    child = x.copy()
    child[:r, c:] = y[:r, c:]
    child[r:, :c] = y[r:, :c]
    return child


def tournament_select(pop: Population, rng: np.random.Generator) -> Individual:
    if len(pop) < 2:
        raise ValueError("tournament needs at least two individuals")
    i, j = rng.choice(len(pop), size=2, replace=False)
    a, b = pop[int(i)], pop[int(j)]
    return b if b.fit < a.fit else a


@dataclass
class RecombineStats:
    be: int = 0
    blind: int = 0
    fallback: int = 0


def recombine_dispatch(parents: Sequence, variant: str, rng: np.random.Generator,
                       use_columns: bool = True,
                       stats: RecombineStats | None = None) -> np.ndarray:
    """Produce one child from ``parents`` according to the MA variant."""
    stats = stats if stats is not None else RecombineStats()
    boards = [as_board(p.board if isinstance(p, Individual) else p) for p in parents]
    variant = variant.upper()
    n = boards[0].shape[0]
    if variant == "TS":
        use_be = False
    elif variant == "BE":
        use_be = True
    else:
        feas = [is_feasible_fitness(fast_fitness(b), n) for b in boards]
        use_be = any(feas) if variant == "BE_1F" else all(feas)
    if use_be:
        sol = be_recombine(boards, use_columns)
        if sol.opt != INF:
            stats.be += 1
            return sol.board
        stats.fallback += 1
    stats.blind += 1
    return blind_2dspx(boards[0], boards[1], rng)


def _init_population(cfg: MAConfig, initial, rng) -> Population:
    pop = Population()
    queue = [as_board(b.board if isinstance(b, Individual) else b) for b in (initial or [])]
    attempts = 0
    while len(pop) < cfg.popsize:
        board = queue.pop(0) if queue else random_board(cfg.n, rng)
        board, fit = local_search(board, cfg.maxiter_ts, rng)
        if not pop.add(Individual(board, fit)):
            attempts += 1
            if attempts > 100 * cfg.popsize:
                raise RuntimeError("could not build a duplicate-free population")
    return pop


def ma_run(config: MAConfig, initial: Iterable | None = None,
           rng: np.random.Generator | None = None, clock=time.monotonic):
    """Run the memetic algorithm until a stop condition holds.

    ``initial`` boards (or individuals) seed the population; each is improved
    by tabu search first, and the rest is filled with random boards.  Returns
    ``(best, trace, info)`` where ``trace`` lists best-so-far improvements.
    """
    cfg = config
    if cfg.time_limit is None and cfg.generations is None and cfg.target is None:
        raise ValueError("MA needs a time limit, a generation count or a target")
    rng = rng if rng is not None else np.random.default_rng(cfg.seed)
    t0 = clock()
    pop = _init_population(cfg, initial, rng)
    best = pop.best()
    trace = [TraceEvent(clock() - t0, 0, best.fit)]
    stats = RecombineStats()
    gen = 0
    be_variant = cfg.variant != "TS"

    def done() -> bool:
        if cfg.target is not None and best.fit <= cfg.target:
            return True
        if cfg.generations is not None and gen >= cfg.generations:
            return True
        return cfg.time_limit is not None and clock() - t0 >= cfg.time_limit

    while not done():
        gen += 1
        if rng.random() < cfg.p_x:
            parents = [tournament_select(pop, rng).board for _ in range(cfg.arity)]
            if be_variant:
                parents = [mutate(p, cfg.p_m, rng) for p in parents]
                child = recombine_dispatch(parents, cfg.variant, rng, cfg.use_columns, stats)
            else:
                child = recombine_dispatch(parents[:2], "TS", rng, stats=stats)
                child = mutate(child, cfg.p_m, rng)
        else:
            child = mutate(tournament_select(pop, rng).board, cfg.p_m, rng)
        board, fit = local_search(child, cfg.maxiter_ts, rng)
        ind = Individual(board, fit)
        pop.replace_worst(ind)
        if fit < best.fit:
            best = ind
            trace.append(TraceEvent(clock() - t0, gen, fit))
        if cfg.debug:
            for m in pop.members:
                assert m.fit == fast_fitness(m.board), "cached fitness out of date"
            assert len(pop.keys) == len(pop.members), "duplicate individuals"
    info = {"generations": gen, "elapsed": clock() - t0, "be_recombinations": stats.be,
            "blind_recombinations": stats.blind, "be_fallbacks": stats.fallback}
    return best, trace, info
