"""Boards, Game-of-Life stability and the penalised fitness.

A board is a square ``numpy`` array of ``uint8`` (1 = alive).  A row is an
``int`` bit field whose bit ``j`` holds column ``j`` (bit 0 is the leftmost
column).

Cell coordinates in :func:`neighbor_count`, :func:`is_cell_stable` and
:func:`delta_fitness` are 1-based and refer to the board embedded in a frame
of dead cells: the embedded view is ``(n+2) x (n+2)``, frame cells sit at
index 1 and ``n+2``, and interior cell ``(i, j)`` holds board cell
``(i-2, j-2)`` in 0-based numpy terms.  Hence ``delta_fitness`` takes
interior indices ``1..n`` measured on the board itself.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence

import numpy as np

from . import _kernels

MAX_WIDTH = 32


# ---------------------------------------------------------------------------
# rows


def row_mask(n: int) -> int:
    return (1 << n) - 1


def zeroes(row: int, n: int) -> int:
    """Number of dead cells in a row of width ``n``."""
    return n - bin(row & row_mask(n)).count("1")


def adjs(row: int, n: int) -> int:
    """Length of the longest run of live cells."""
    best = run = 0
    for j in range(n):
        if row >> j & 1:
            run += 1
            best = max(best, run)
        else:
            run = 0
    return best


def reflect(row: int, n: int) -> int:
    out = 0
    for j in range(n):
        if row >> j & 1:
            out |= 1 << (n - 1 - j)
    return out


def row_from_str(text: str) -> int:
    """``"10110"`` -> row with columns 0, 2, 3 alive (character j is column j)."""
    return sum(1 << j for j, ch in enumerate(text) if ch in "1#")


def row_to_str(row: int, n: int) -> str:
    return "".join("1" if row >> j & 1 else "0" for j in range(n))


# ---------------------------------------------------------------------------
# boards


def as_board(obj) -> np.ndarray:
    b = np.asarray(obj, dtype=np.uint8)
    if b.ndim != 2 or b.shape[0] != b.shape[1]:
        raise ValueError(f"board must be square, got shape {b.shape}")
    if b.shape[0] > MAX_WIDTH:
        raise ValueError(f"board width {b.shape[0]} exceeds {MAX_WIDTH}")
    return b


def empty_board(n: int) -> np.ndarray:
    return np.zeros((n, n), dtype=np.uint8)


def board_from_rows(rows: Sequence[int], n: int | None = None) -> np.ndarray:
    n = len(rows) if n is None else n
    if len(rows) != n:
        raise ValueError(f"need {n} rows, got {len(rows)}")
    out = np.zeros((n, n), dtype=np.uint8)
    for i, r in enumerate(rows):
        r = int(r)
        if r >> n:
            raise ValueError(f"row {i} has bits above width {n}")
        for j in range(n):
            out[i, j] = r >> j & 1
    return out


def board_to_rows(board) -> list[int]:
    b = as_board(board)
    weights = 1 << np.arange(b.shape[1], dtype=np.int64)
    return [int(v) for v in b.astype(np.int64) @ weights]


def board_columns(board) -> list[int]:
    """Columns read top to bottom, encoded like rows (bit i = row i)."""
    return board_to_rows(as_board(board).T)


def parse_board(text: str) -> np.ndarray:
    lines = [ln.strip() for ln in text.strip().splitlines() if ln.strip()]
    bad = set("".join(lines)) - set("#.")
    if bad:
        raise ValueError(f"unexpected characters {sorted(bad)} in board text")
    return as_board([[1 if ch == "#" else 0 for ch in ln] for ln in lines])


def format_board(board) -> str:
    b = as_board(board)
    return "\n".join("".join("#" if v else "." for v in row) for row in b)


def to_rle(board, name: str | None = None) -> str:
    """Game-of-Life RLE (B3/S23) of the board, 70 columns per line."""
    b = as_board(board)
    n = b.shape[0]
    runs: list[str] = []
    for i, row in enumerate(b):
        tokens = []
        j = 0
        while j < n:
            k = j
            while k < n and row[k] == row[j]:
                k += 1
            tokens.append((k - j, "o" if row[j] else "b"))
            j = k
        if tokens and tokens[-1][1] == "b":
            tokens.pop()
        runs.append("".join(f"{c if c > 1 else ''}{t}" for c, t in tokens))
    body = "$".join(runs) + "!"
    lines = [body[p:p + 70] for p in range(0, len(body), 70)]
    head = [f"#N {name}"] if name else []
    head.append(f"x = {n}, y = {n}, rule = B3/S23")
    return "\n".join(head + lines) + "\n"


def parse_rle(text: str) -> np.ndarray:
    body = []
    n = None
    for ln in text.splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if ln.startswith("x"):
            m = re.match(r"x\s*=\s*(\d+)\s*,\s*y\s*=\s*(\d+)", ln)
            if not m or m.group(1) != m.group(2):
                raise ValueError("RLE header must describe a square board")
            n = int(m.group(1))
            continue
        body.append(ln)
    if n is None:
        raise ValueError("RLE header missing")
    out = np.zeros((n, n), dtype=np.uint8)
    i = j = 0
    for count, tag in re.findall(r"(\d*)([bo$!])", "".join(body)):
        c = int(count) if count else 1
        if tag == "!":
            break
        if tag == "$":
            i += c
            j = 0
        else:
            if tag == "o":
                out[i, j:j + c] = 1
            j += c
    return out


def embed(board) -> np.ndarray:
    b = as_board(board)
    return np.pad(b, 1)


def _counts(e: np.ndarray) -> np.ndarray:
    p = np.pad(e.astype(np.int64), 1)
    h, w = e.shape
    total = sum(p[1 + di:1 + di + h, 1 + dj:1 + dj + w]
                for di in (-1, 0, 1) for dj in (-1, 0, 1) if di or dj)
    return total


def _check_embedded(n: int, i: int, j: int) -> None:
    if not (1 <= i <= n + 2 and 1 <= j <= n + 2):
        raise IndexError(f"embedded index ({i}, {j}) outside 1..{n + 2}")


def neighbor_count(board, i: int, j: int) -> int:
    e = embed(board)
    n = e.shape[0] - 2
    _check_embedded(n, i, j)
    y, x = i - 1, j - 1
    window = e[max(y - 1, 0):y + 2, max(x - 1, 0):x + 2]
    return int(window.sum()) - int(e[y, x])


def _stable(alive, eta):
    return np.where(alive == 1, (eta >= 2) & (eta <= 3), eta != 3)


def is_cell_stable(board, i: int, j: int) -> bool:
    e = embed(board)
    _check_embedded(e.shape[0] - 2, i, j)
    return bool(_stable(e[i - 1, j - 1], neighbor_count(board, i, j)))


def step(board) -> np.ndarray:
    """One Game-of-Life generation of the framed board, shape (n+2, n+2)."""
    e = embed(board)
    p = np.pad(e.astype(np.int64), 1)
    h = e.shape[0]
    window = np.zeros_like(e, dtype=np.int64)
    for di in range(3):
        for dj in range(3):
            window += p[di:di + h, dj:dj + h]
    neigh = window - e
    # survival on 2 or 3, birth on exactly 3
    born = (e == 0) & (neigh == 3)
    lives = (e == 1) & ((neigh == 2) | (neigh == 3))
    return (born | lives).astype(np.uint8)


def is_still_life(board) -> bool:
    e = embed(board)
    return bool(_stable(e, _counts(e)).all())


def violations(board) -> int:
    """Number of unstable cells in the framed board."""
    e = embed(board)
    return int((~_stable(e, _counts(e))).sum())


# ---------------------------------------------------------------------------
# penalised fitness


def penalty_constants(n: int) -> tuple[int, int]:
    """(K, K') = (n^2, 5 n^2)."""
    return n * n, 5 * n * n


def phi0(eta: int, kp: int) -> int:
    return kp + 1 if eta == 3 else 0


def phi1(eta: int, kp: int) -> int:
    if eta < 2:
        return kp + 2 - eta
    if eta > 3:
        return kp + eta - 3
    return 0


def _penalty_array(e: np.ndarray, eta: np.ndarray, kp: int) -> np.ndarray:
    p1 = np.where(eta < 2, kp + 2 - eta, np.where(eta > 3, kp + eta - 3, 0))
    p0 = np.where(eta == 3, kp + 1, 0)
    return np.where(e == 1, p1, p0)


def penalty(board) -> int:
    """The bracketed sum of the fitness, before scaling by K."""
    e = embed(board)
    _, kp = penalty_constants(e.shape[0] - 2)
    return int(_penalty_array(e, _counts(e), kp).sum())


def fitness(board) -> int:
    """Dead cells plus K times the per-cell distance-to-stability penalty."""
    b = as_board(board)
    k, _ = penalty_constants(b.shape[0])
    dead = b.size - int(b.sum())
    return dead + k * penalty(b)


def is_feasible_fitness(fit: int, n: int) -> bool:
    # any violation costs at least K * (K' + 1) > n^2
    return fit <= n * n


def delta_tables(kp: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-cell penalty changes caused by flipping one cell.

    ``df1[c, eta]``: change of the flipped cell's own penalty (``c`` its state
    before the flip).  ``df2[c2, eta, c]``: change for a neighbour in state
    ``c2`` with ``eta`` live neighbours when the flipped cell was ``c``.
    Both are in units of K.
    """
    df1 = np.zeros((2, 9), dtype=np.int64)
    df2 = np.zeros((2, 9, 2), dtype=np.int64)
    for eta in range(9):
        for c in (0, 1):
            if eta == 2:
                df1[c, eta] = 0
            elif eta == 3:
                df1[c, eta] = (-1) ** (1 - c) * phi0(eta, kp)
            else:
                df1[c, eta] = (-1) ** c * phi1(eta, kp)
            # dead neighbour
            if (eta == 2 and c == 0) or (eta == 4 and c == 1):
                df2[0, eta, c] = kp + 1
            elif eta == 3:
                df2[0, eta, c] = -(kp + 1)
            # live neighbour
            if (eta == 2 and c == 1) or (eta == 3 and c == 0):
                df2[1, eta, c] = kp + 1
            elif (eta == 1 and c == 0) or (eta == 4 and c == 1):
                df2[1, eta, c] = -(kp + 1)
            elif (eta == 1 and c == 1) or (eta >= 4 and c == 0):
                df2[1, eta, c] = 1
            elif eta == 0 or (eta >= 5 and c == 1):
                df2[1, eta, c] = -1
    return df1, df2


def delta_fitness(board, i: int, j: int) -> int:
    """fitness(board with interior cell (i, j) flipped) - fitness(board).

    Only the flipped cell and its eight neighbours are inspected.
    """
    b = as_board(board)
    n = b.shape[0]
    if not (1 <= i <= n and 1 <= j <= n):
        raise IndexError(f"cell ({i}, {j}) outside 1..{n}")
    k, kp = penalty_constants(n)
    df1, df2 = delta_tables(kp)
    e = embed(b)
    y, x = i, j  # interior cell in 0-based embedded coordinates
    c = int(e[y, x])
    local = np.pad(e, 1)[y - 1:y + 4, x - 1:x + 4].astype(np.int64)
    s = int(df1[c, int(local[1:4, 1:4].sum()) - c])
    for dy in (-1, 0, 1):
        for dx in (-1, 0, 1):
            if dy or dx:
                cy, cx = 2 + dy, 2 + dx
                cc = int(local[cy, cx])
                eta = int(local[cy - 1:cy + 2, cx - 1:cx + 2].sum()) - cc
                s += int(df2[cc, eta, c])
    return (1 if c == 1 else -1) + k * s


def flip(board, i: int, j: int) -> np.ndarray:
    out = as_board(board).copy()
    out[i - 1, j - 1] ^= 1
    return out


def fast_fitness(board) -> int:
    b = as_board(board)
    k, kp = penalty_constants(b.shape[0])
    return int(_kernels.fitness_kernel(b, k, kp))


def iter_boards(n: int) -> Iterable[np.ndarray]:
    """All 2^(n*n) boards in increasing board-integer order (bit i*n+j)."""
    shifts = np.arange(n * n, dtype=np.int64)
    for v in range(1 << (n * n)):
        yield ((v >> shifts) & 1).astype(np.uint8).reshape(n, n)
