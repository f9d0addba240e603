import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from hypothesis.extra.numpy import arrays

from stilllife.life_core import (
    adjs, as_board, board_columns, board_from_rows, board_to_rows, delta_fitness, embed,
    empty_board, fast_fitness, fitness, flip, format_board, is_cell_stable, is_feasible_fitness,
    is_still_life, iter_boards, neighbor_count, parse_board, parse_rle, penalty, reflect,
    row_from_str, step, to_rle, violations, zeroes,
)

BLOCK = np.ones((2, 2), dtype=np.uint8)

boards = st.integers(1, 7).flatmap(
    lambda n: arrays(np.uint8, (n, n), elements=st.integers(0, 1)))


def test_neighbor_count_examples():
    assert neighbor_count(empty_board(3), 3, 3) == 0
    assert neighbor_count(np.ones((3, 3), np.uint8), 3, 3) == 8
    # embedded (2, 2) is the board's top-left cell
    assert neighbor_count(BLOCK, 2, 2) == 3
    # frame cells count too
    assert neighbor_count(BLOCK, 1, 1) == 1
    with pytest.raises(IndexError):
        neighbor_count(BLOCK, 0, 1)
    with pytest.raises(IndexError):
        neighbor_count(BLOCK, 5, 1)


def test_cell_stability_examples():
    assert all(is_cell_stable(empty_board(4), i, j) for i in range(1, 7) for j in range(1, 7))
    assert all(is_cell_stable(BLOCK, i, j) for i in (2, 3) for j in (2, 3))
    assert not is_cell_stable(np.ones((1, 1), np.uint8), 2, 2)
    with pytest.raises(IndexError):
        is_cell_stable(BLOCK, 1, 6)


def test_step_examples():
    assert (step(BLOCK) == embed(BLOCK)).all()
    single = np.zeros((3, 3), np.uint8)
    single[1, 1] = 1
    assert step(single).sum() == 0
    blinker = np.zeros((3, 3), np.uint8)
    blinker[:, 1] = 1
    want = np.zeros((5, 5), np.uint8)
    want[2, 1:4] = 1
    assert (step(blinker) == want).all()


def test_still_life_examples():
    assert is_still_life(BLOCK)
    assert not is_still_life(np.ones((3, 3), np.uint8))
    for n in (1, 4, 9):
        assert is_still_life(empty_board(n))
    # a 1 x 3 line sticking out of the frame would give birth outside
    line = np.zeros((3, 3), np.uint8)
    line[0] = 1
    assert not is_still_life(line)


def test_fitness_examples():
    assert fitness(BLOCK) == 0
    assert fitness(empty_board(5)) == 25
    single = np.zeros((3, 3), np.uint8)
    single[1, 1] = 1
    assert fitness(single) == 431
    assert fast_fitness(single) == 431


def test_delta_examples():
    assert delta_fitness(empty_board(3), 2, 2) == 422
    tromino = flip(BLOCK, 1, 1)
    assert delta_fitness(BLOCK, 1, 1) == fitness(tromino) - 0
    with pytest.raises(IndexError):
        delta_fitness(BLOCK, 0, 1)


@settings(max_examples=300, deadline=None)
@given(boards, st.data())
def test_delta_matches_recomputation(b, data):
    n = b.shape[0]
    i = data.draw(st.integers(1, n))
    j = data.draw(st.integers(1, n))
    d = delta_fitness(b, i, j)
    assert d == fitness(flip(b, i, j)) - fitness(b)
    # flipping back undoes it
    assert d + delta_fitness(flip(b, i, j), i, j) == 0


@settings(max_examples=300, deadline=None)
@given(boards)
def test_fitness_agrees_with_stability(b):
    still = is_still_life(b)
    assert (penalty(b) == 0) == still == bool((step(b) == embed(b)).all())
    assert (violations(b) == 0) == still
    assert fitness(b) == fast_fitness(b)
    assert is_feasible_fitness(fitness(b), b.shape[0]) == still
    if still:
        assert fitness(b) == b.size - b.sum()


def test_all_3x3_boards():
    count = stills = 0
    for b in iter_boards(3):
        count += 1
        stills += is_still_life(b)
        assert (penalty(b) == 0) == is_still_life(b)
    assert count == 512
    assert stills > 1


def test_row_helpers():
    assert zeroes(0, 5) == 5
    assert zeroes(0b11111, 5) == 0
    assert zeroes(row_from_str("10110"), 5) == 2
    assert adjs(0, 5) == 0
    assert adjs(row_from_str("01110"), 5) == 3
    assert adjs(row_from_str("11011"), 5) == 2
    assert reflect(row_from_str("10000"), 5) == row_from_str("00001")
    assert reflect(row_from_str("10101"), 5) == row_from_str("10101")
    for r in range(64):
        assert reflect(reflect(r, 6), 6) == r


@settings(max_examples=100, deadline=None)
@given(boards)
def test_round_trips(b):
    n = b.shape[0]
    assert (board_from_rows(board_to_rows(b), n) == b).all()
    assert (board_from_rows(board_columns(b), n) == b.T).all()
    assert (parse_board(format_board(b)) == b).all()
    assert (parse_rle(to_rle(b, "x")) == b).all()


def test_board_validation():
    with pytest.raises(ValueError):
        as_board(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        board_from_rows([4, 0], 2)
    with pytest.raises(ValueError):
        parse_board("#x\n..")
