"""Oracle-equivalence and property suites at desk scale.

Each suite returns a :class:`SuiteResult`; ``run_all`` prints one line per
suite and reports overall success.  The acceptance tests call the same
functions with the full sample counts.
"""
from __future__ import annotations

import logging
import time
from dataclasses import dataclass

import numpy as np

from . import _kernels
from .beam_hybrid import _expand
from .bucket_elim import (be_recombine, be_solve, be_solve_symmetric_opt, full_domain,
                          symmetric_domain, Domain)
from .life_core import (board_columns, board_to_rows, delta_fitness, embed, fast_fitness,
                        fitness, flip, is_still_life, iter_boards, penalty, step)
from .memetic import local_search
from .minibucket import batch_bounds, build_mb_tables, mb_lower_bound, segment_layout
from .oracle import (best_completion_batch, brute_force_domain, exhaustive_best_completion,
                     exhaustive_opt, random_board)
from .wcsp_row import INF, partial_cost, total_cost

log = logging.getLogger(__name__)

SMDSLP_OPTIMA = {12: 68, 13: 79, 14: 92}
EXHAUSTIVE_OPTIMA = {3: 3, 4: 8}   # derived once by exhaustive_opt, frozen


@dataclass
class SuiteResult:
    name: str
    checked: int
    violations: int
    seconds: float
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.violations == 0 and self.checked > 0

    def line(self) -> str:
        tag = "PASS" if self.ok else "FAIL"
        extra = f" ({self.detail})" if self.detail else ""
        return (f"{tag} {self.name}: {self.checked} checked, {self.violations} violations, "
                f"{self.seconds:.1f}s{extra}")


def _timed(name, fn) -> SuiteResult:
    t0 = time.monotonic()
    checked, bad, detail = fn()
    return SuiteResult(name, checked, bad, time.monotonic() - t0, detail)


def oracle_equivalence(ns=(3, 4)) -> SuiteResult:
    def run():
        bad, parts = 0, []
        for n in ns:
            ex, _ = exhaustive_opt(n)
            be = be_solve(n, full_domain(n)).opt
            frozen = EXHAUSTIVE_OPTIMA.get(n, ex)
            bad += int(ex != be or ex != frozen)
            parts.append(f"n={n}: {ex}/{be}")
        return len(ns), bad, ", ".join(parts)
    return _timed("oracle equivalence", run)


def smdslp_optima(ns=(12, 13, 14)) -> SuiteResult:
    def run():
        bad, parts = 0, []
        for n in ns:
            sol = be_solve_symmetric_opt(n, symmetric_domain(n))
            ok = sol.opt == SMDSLP_OPTIMA[n] and total_cost(sol.board) == sol.opt
            bad += int(not ok)
            parts.append(f"n={n}: {sol.opt}")
        return len(ns), bad, ", ".join(parts)
    return _timed("symmetric optima", run)


def desk_optima(ns=(5, 6, 7, 8), brute_ns=(5, 6), seed=0) -> SuiteResult:
    """Plain BE vs folded BE; BE vs brute force on domains holding an optimum."""
    rng = np.random.default_rng(seed)
    limit = 2_000_000

    def run():
        bad, checked, parts = 0, 0, []
        for n in ns:
            plain = be_solve(n, full_domain(n))
            folded = be_solve_symmetric_opt(n, full_domain(n))
            ok = plain.opt == folded.opt == total_cost(plain.board) == total_cost(folded.board)
            bad += int(not ok)
            checked += 1
            parts.append(f"n={n}: {plain.opt}")
            if n in brute_ns:
                rows = set(board_to_rows(plain.board))
                cap = int(limit ** (1 / n))
                while len(rows) < cap:
                    rows.add(int(rng.integers(0, 1 << n)))
                dom = Domain(n, tuple(rows))
                bf, _ = brute_force_domain(n, dom.values, limit)
                restricted = be_solve(n, dom).opt
                bad += int(not (bf == restricted == plain.opt))
                bad += int(exhaustive_best_completion([], n) != plain.opt)
                checked += 2
        return checked, bad, ", ".join(parts)
    return _timed("desk optima", run)


def fitness_normativity(samples=100_000, max_n=10, seed=0) -> SuiteResult:
    """penalty 0 <=> still life <=> fixed point of one step, on all 3x3 and random boards."""
    rng = np.random.default_rng(seed)

    def check(b) -> bool:
        z = penalty(b) == 0
        s = is_still_life(b)
        f = bool((step(b) == embed(b)).all())
        return z == s == f and fitness(b) == fast_fitness(b)

    def run():
        bad = checked = stills = 0
        for b in iter_boards(3):
            bad += int(not check(b))
            stills += int(is_still_life(b))
            checked += 1
        for t in range(samples):
            n = int(rng.integers(1, max_n + 1))
            if t % 4 == 0 and n >= 3:
                # perturbed optimum: still lifes and near misses
                b = _optimum(n).copy()
                for _ in range(int(rng.integers(0, 3))):
                    i, j = rng.integers(0, n, size=2)
                    b[i, j] ^= 1
            else:
                b = (rng.random((n, n)) < rng.random()).astype(np.uint8)
            bad += int(not check(b))
            stills += int(is_still_life(b))
            checked += 1
        return checked, bad, f"{stills} still lifes"
    return _timed("fitness normativity", run)


_OPT_CACHE: dict[int, np.ndarray] = {}


def _optimum(n: int) -> np.ndarray:
    if n not in _OPT_CACHE:
        dom = full_domain(n) if n <= 8 else symmetric_domain(n)
        _OPT_CACHE[n] = be_solve(n, dom).board
    return _OPT_CACHE[n]


def delta_exactness(samples=10_000, max_n=10, seed=1) -> SuiteResult:
    rng = np.random.default_rng(seed)

    def run():
        bad = 0
        for _ in range(samples):
            n = int(rng.integers(1, max_n + 1))
            b = (rng.random((n, n)) < rng.random()).astype(np.uint8)
            i, j = (int(v) for v in rng.integers(1, n + 1, size=2))
            bad += int(delta_fitness(b, i, j) != fitness(flip(b, i, j)) - fitness(b))
        return samples, bad, ""
    return _timed("incremental fitness", run)


def _stable_prefixes(n: int):
    """Every prefix (all depths) whose decided rows are stable."""
    rows = np.zeros((1, 0), dtype=np.int64)
    costs = np.zeros(1, dtype=np.int64)
    allr = np.arange(1 << n, dtype=np.int64)
    for _ in range(n):
        rows, costs = _expand(rows, costs, allr, n)
        keep = costs < _kernels.INF_I
        rows, costs = rows[keep], costs[keep]
        yield rows, costs


def mb_admissibility(exhaustive_ns=(5, 6), sampled_ns=(7, 8), samples=1000,
                     scalar_checks=200, seed=2) -> SuiteResult:
    """lb <= best completion of the prefix, and lb >= partial cost."""
    rng = np.random.default_rng(seed)

    def check(n, rows, costs, tables):
        k = rows.shape[1]
        lb = batch_bounds(tables, rows[:, -2], rows[:, -1], costs, k) if k >= 2 else costs
        lb = np.where(lb >= _kernels.INF_I, np.inf, lb).astype(float)
        best = best_completion_batch(rows, n)
        return int(((lb > best) | (lb < costs)).sum())

    def run():
        bad = checked = 0
        for n in exhaustive_ns:
            tables = build_mb_tables(n, segment_layout(n, min(3, n // 2)))
            for rows, costs in _stable_prefixes(n):
                bad += check(n, rows, costs, tables)
                checked += rows.shape[0]
                # the public scalar path on a few of them
                for t in rng.choice(rows.shape[0], size=min(scalar_checks, rows.shape[0]),
                                    replace=False):
                    pre = [int(r) for r in rows[t]]
                    lb = mb_lower_bound(pre, tables)
                    bad += int(lb > exhaustive_best_completion(pre, n) or
                               lb < partial_cost(pre, n))
        for n in sampled_ns:
            tables = build_mb_tables(n, segment_layout(n, 3))
            per_depth = max(1, samples // n)
            for rows, costs in _stable_prefixes_sampled(n, per_depth, rng):
                bad += check(n, rows, costs, tables)
                checked += rows.shape[0]
        return checked, bad, ""
    return _timed("mini-bucket admissibility", run)


def _stable_prefixes_sampled(n: int, per_depth: int, rng):
    """Random stable prefixes per depth, grown from a subsampled frontier."""
    rows = np.zeros((1, 0), dtype=np.int64)
    costs = np.zeros(1, dtype=np.int64)
    allr = np.arange(1 << n, dtype=np.int64)
    for _ in range(n):
        rows, costs = _expand(rows, costs, allr, n)
        keep = costs < _kernels.INF_I
        rows, costs = rows[keep], costs[keep]
        if rows.shape[0] > 4 * per_depth:
            pick = rng.choice(rows.shape[0], size=4 * per_depth, replace=False)
            rows, costs = rows[pick], costs[pick]
        pick = rng.choice(rows.shape[0], size=min(per_depth, rows.shape[0]), replace=False)
        yield rows[pick], costs[pick]


def feasible_pool(n: int, size: int, rng) -> list[np.ndarray]:
    """Distinct still lifes found by tabu search from random boards."""
    pool, seen = [], set()
    tries = 0
    while len(pool) < size:
        tries += 1
        if tries > 200 * size:
            raise RuntimeError(f"could not find {size} still lifes for n={n}")
        b, fit = local_search(random_board(n, rng), 4 * n * n, rng)
        if fit <= n * n and b.tobytes() not in seen:
            seen.add(b.tobytes())
            pool.append(b)
    return pool


def recombination_dominance(tuples=1000, ns=(8, 10, 12), arities=(2, 4), pool=40,
                            seed=3) -> SuiteResult:
    rng = np.random.default_rng(seed)

    def run():
        bad = checked = 0
        pools = {n: feasible_pool(n, pool, rng) for n in ns}
        combos = [(n, a) for n in ns for a in arities]
        for t in range(tuples):
            n, arity = combos[t % len(combos)]
            idx = rng.choice(len(pools[n]), size=arity, replace=False)
            parents = [pools[n][i] for i in idx]
            sol = be_recombine(parents, use_columns=bool(t % 2))
            material = set()
            for p in parents:
                material.update(board_to_rows(p))
                if t % 2:
                    material.update(board_columns(p))
            best_parent = min(total_cost(p) for p in parents)
            ok = (sol.opt != INF and sol.opt <= best_parent
                  and total_cost(sol.board) == sol.opt
                  and set(board_to_rows(sol.board)) <= material)
            bad += int(not ok)
            checked += 1
        return checked, bad, ""
    return _timed("recombination dominance", run)


def run_all(quick: bool = False) -> bool:
    scale = 10 if quick else 1
    suites = [
        lambda: oracle_equivalence(),
        lambda: smdslp_optima(),
        lambda: desk_optima(),
        lambda: fitness_normativity(samples=100_000 // scale),
        lambda: delta_exactness(samples=10_000 // scale),
        lambda: mb_admissibility(samples=1000 // scale),
        lambda: recombination_dominance(tuples=1000 // scale),
    ]
    ok = True
    for s in suites:
        r = s()
        print(r.line(), flush=True)
        ok &= r.ok
    print("all suites passed" if ok else "FAILURES")
    return ok
