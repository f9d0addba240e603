import numpy as np
import pytest

from stilllife.bucket_elim import (
    Domain, be_recombine, be_solve, be_solve_symmetric_opt, full_domain, recombination_domain,
    symmetric_domain,
)
from stilllife.life_core import board_columns, board_to_rows, is_still_life, reflect
from stilllife.oracle import brute_force_domain, exhaustive_opt
from stilllife.wcsp_row import INF, total_cost

KNOWN = {3: 3, 4: 8, 5: 9, 6: 18, 7: 21, 8: 28}


def test_domains():
    assert full_domain(1).values == (0, 1)
    assert len(full_domain(3)) == 8
    assert len(full_domain(7)) == 128
    assert symmetric_domain(2).values == (0, 0b11)
    assert symmetric_domain(3).values == (0, 0b010, 0b101, 0b111)
    for n in range(1, 12):
        dom = symmetric_domain(n)
        assert len(dom) == 2 ** ((n + 1) // 2)
        assert all(reflect(r, n) == r for r in dom.values)
    with pytest.raises(ValueError):
        full_domain(11)
    assert len(full_domain(11, allow_large=True)) == 2048
    with pytest.raises(ValueError):
        Domain(3, (8,))
    with pytest.raises(ValueError):
        Domain(3, ())


@pytest.mark.parametrize("n", [3, 4])
def test_matches_exhaustive(n):
    sol = be_solve(n, full_domain(n))
    assert sol.opt == exhaustive_opt(n)[0] == KNOWN[n]


@pytest.mark.parametrize("n", sorted(KNOWN))
def test_plain_and_folded_agree(n):
    plain = be_solve(n, full_domain(n))
    folded = be_solve_symmetric_opt(n, full_domain(n))
    assert plain.opt == folded.opt == KNOWN[n]
    for sol in (plain, folded):
        assert is_still_life(sol.board)
        assert total_cost(sol.board) == sol.opt


@pytest.mark.parametrize("n, opt", [(12, 68), (13, 79), (14, 92)])
def test_symmetric_optima(n, opt):
    sol = be_solve_symmetric_opt(n, symmetric_domain(n))
    assert sol.opt == opt
    assert total_cost(sol.board) == opt
    assert all(reflect(r, n) == r for r in board_to_rows(sol.board))


def test_symmetric_optimum_unfolded():
    assert be_solve(12, symmetric_domain(12)).opt == 68


@pytest.mark.parametrize("n", [5, 6, 7])
def test_random_domains_vs_brute_force(n, rng):
    for _ in range(3):
        size = 5 if n < 7 else 4
        vals = rng.choice(1 << n, size=size, replace=False)
        dom = Domain(n, tuple(int(v) for v in vals) + (0,))
        bf, _ = brute_force_domain(n, dom.values)
        assert be_solve(n, dom).opt == bf
        assert be_solve_symmetric_opt(n, dom).opt == bf


def test_infeasible_domain():
    # only the all-live row: never stable
    sol = be_solve(4, Domain(4, (0b1111,)))
    assert sol.opt == INF and sol.board is None and not sol.feasible


def test_low_memory_mode():
    sol = be_solve(8, full_domain(8), return_board=False)
    assert sol.opt == 28 and sol.board is None
    assert sol.stats["domain_size"] == 256


def test_small_n_rejected():
    with pytest.raises(ValueError):
        be_solve(2, full_domain(2))


def test_recombination():
    x = be_solve(8, full_domain(8)).board
    y = be_solve(8, symmetric_domain(8)).board
    assert be_recombine([x, x]).opt <= total_cost(x)
    child = be_recombine([x, y])
    assert child.opt <= min(total_cost(x), total_cost(y))
    pool = set(board_to_rows(x) + board_to_rows(y) + board_columns(x) + board_columns(y))
    assert set(board_to_rows(child.board)) <= pool
    rows_only = recombination_domain([x, y], use_columns=False)
    assert set(rows_only.values) == set(board_to_rows(x) + board_to_rows(y))


def test_recombine_two_optima_n12():
    a = be_solve_symmetric_opt(12, symmetric_domain(12)).board
    b = np.fliplr(a.T).copy()   # rotate: a different optimal board
    assert total_cost(b) == 68
    assert be_recombine([a, b]).opt <= 68
