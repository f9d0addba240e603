"""Mini-bucket lower bounds for partially assigned boards.

Each row is cut into M segments.  A segment's cost function looks at the
segment's owned columns of the middle row plus one overlap column on each
interior side in all three rows, which is exactly what is needed to count
the neighbours of the owned cells.  Eliminating rows bottom-up separately per
segment gives tables whose sum never exceeds the true best completion cost.
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import _kernels
from .life_core import row_mask
from .wcsp_row import INF, from_table, partial_cost

CACHE_VERSION = 2
SCOPE_CAP = 12
TABLE_INF = np.iinfo(np.uint16).max
"""Stored tables are uint16 (a 12-wide scope at n = 28 would need 3.6 GB as
int64); this value stands for an infinite entry."""


@dataclass(frozen=True)
class SegmentLayout:
    """Widths, owned columns and scopes (1-based, inclusive) of the segments."""

    n: int
    widths: tuple[int, ...]

    @property
    def M(self) -> int:
        return len(self.widths)

    def owned(self, m: int) -> tuple[int, int]:
        start = sum(self.widths[:m])
        return start + 1, start + self.widths[m]

    def scope(self, m: int) -> tuple[int, int]:
        lo, hi = self.owned(m)
        if m > 0:
            lo -= 1
        if m < self.M - 1:
            hi += 1
        return lo, hi

    def scope_width(self, m: int) -> int:
        lo, hi = self.scope(m)
        return hi - lo + 1

    def owned_mask(self, m: int) -> int:
        lo, hi = self.owned(m)
        return row_mask(hi - lo + 1) << (lo - 1)

    def meta(self, row, m: int):
        """Segment-``m`` meta value of a row (int or int64 array)."""
        lo, _ = self.scope(m)
        return (row >> (lo - 1)) & row_mask(self.scope_width(m))


def segment_layout(n: int, M: int = 3) -> SegmentLayout:
    """Near-equal segment widths, larger segments placed symmetrically.

    The remainder r = n mod M is handed out one column at a time: the centre
    segment first when both r and M are odd, then pairs of mirrored segments
    from the outside in, and a final single column (only possible for even M)
    to the next left segment.  For M = 3 this yields (n/3, n/3, n/3),
    (fl, ce, fl) and (ce, fl, ce) for n mod 3 = 0, 1, 2.
    """
    if not 2 <= M <= n // 2:
        raise ValueError(f"need 2 <= M <= n/2, got M={M}, n={n}")
    q, r = divmod(n, M)
    widths = [q] * M
    if r % 2 and M % 2:
        widths[M // 2] += 1
        r -= 1
    m = 0
    while r >= 2:
        widths[m] += 1
        widths[M - 1 - m] += 1
        r -= 2
        m += 1
    if r:
        widths[m] += 1
    return SegmentLayout(n, tuple(widths))


def f_cell(alive: int, eta: int):
    """Cell cost: INF if unstable, else 1 for a dead cell and 0 for a live one."""
    stable = 2 <= eta <= 3 if alive else eta != 3
    return (1 - alive) if stable else INF


def _segment_masks(layout: SegmentLayout, m: int):
    n = layout.n
    lo, _ = layout.scope(m)
    shift = lo - 1
    owned = layout.owned_mask(m)
    frame = 0
    if m == 0:
        frame |= 1
    if m == layout.M - 1:
        frame |= 1 << (n - 1)
    return shift, owned, frame, row_mask(n)


def f_segment(a: int, b: int, c: int, row_kind: str, m: int, layout: SegmentLayout):
    """Cost of the owned cells of segment ``m`` in the middle row ``b``.

    ``a``/``b``/``c`` are meta values over the segment scope.  ``row_kind``
    is ``"first"`` (a is the dead frame row), ``"last"`` (c is) or
    ``"interior"``.  The first and last segments also guard the left and
    right frame columns; first/last rows guard the frame above/below.
    """
    sw = layout.scope_width(m)
    for v in (a, b, c):
        if v < 0 or v >> sw:
            raise ValueError(f"meta value {v:#b} wider than scope {sw}")
    shift, owned, frame, full = _segment_masks(layout, m)
    if row_kind == "first":
        a = 0
    elif row_kind == "last":
        c = 0
    elif row_kind != "interior":
        raise ValueError(f"unknown row kind {row_kind!r}")
    A, B, C = a << shift, b << shift, c << shift
    bad = _kernels.row_unstable(A, B, C, full) & owned
    bad |= A & B & C & frame
    if row_kind != "interior":
        bad |= B & ((B << 1) & full) & (B >> 1) & owned
    if bad:
        return INF
    return bin(~B & owned).count("1")


@dataclass
class MBTables:
    """Per-segment elimination tables ``g[m][i]`` for i = 3..n+1 (compact uint16)."""

    layout: SegmentLayout
    g: list[dict[int, np.ndarray]]

    @property
    def n(self) -> int:
        return self.layout.n

    def table(self, m: int, i: int) -> np.ndarray:
        """``g[m][i]`` as int64 with infinite entries set to the kernel sentinel."""
        return _expand_table(self.g[m][i])


def _compact(t: np.ndarray) -> np.ndarray:
    if (t[t < _kernels.INF_I] >= TABLE_INF).any():
        raise OverflowError("bound table entry does not fit 16 bits")
    return np.where(t >= _kernels.INF_I, TABLE_INF, t).astype(np.uint16)


def _expand_table(v: np.ndarray) -> np.ndarray:
    v = v.astype(np.int64)
    return np.where(v == TABLE_INF, _kernels.INF_I, v)


def build_mb_tables(n: int, layout: SegmentLayout | None = None) -> MBTables:
    layout = layout or segment_layout(n)
    if layout.n != n:
        raise ValueError("layout built for another board size")
    g = []
    for m in range(layout.M):
        sw = layout.scope_width(m)
        if sw > SCOPE_CAP:
            raise ValueError(f"segment scope {sw} exceeds cap {SCOPE_CAP}; use a larger M")
        shift, owned, frame, full = _segment_masks(layout, m)
        dom = np.arange(1 << sw, dtype=np.int64) << shift
        indptr, indices = _kernels.triple_csr(dom, owned, frame, full)
        dead = _kernels.dead_counts(dom, owned)
        last = _kernels.edge_table(dom, owned, full, False)
        tables = {n + 1: _compact(last)}
        t = last
        for i in range(n, 2, -1):
            t, _ = _kernels.eliminate(indptr, indices, dead, t)
            tables[i] = _compact(t)
        del indptr, indices
        g.append(tables)
    return MBTables(layout, g)


def mb_lower_bound(rows, tables: MBTables):
    """Prefix cost plus the per-segment tables at the two trailing rows."""
    n = tables.n
    k = len(rows)
    base = partial_cost(rows, n)
    if k < 2 or base == INF:
        return base
    return base + from_table(_bound_terms(tables, np.asarray([rows[-2]]),
                                          np.asarray([rows[-1]]), k)[0])


def _bound_terms(tables: MBTables, prev: np.ndarray, last: np.ndarray, k: int) -> np.ndarray:
    """Sum of segment tables for depth ``k`` (int64 array, INF saturated)."""
    layout = tables.layout
    out = np.zeros(prev.shape[0], dtype=np.int64)
    for m in range(layout.M):
        t = tables.g[m][k + 1]
        out += _expand_table(t[layout.meta(prev, m), layout.meta(last, m)])
    return np.minimum(out, _kernels.INF_I)


def batch_bounds(tables: MBTables, prev: np.ndarray, last: np.ndarray,
                 base: np.ndarray, k: int) -> np.ndarray:
    """Vectorised :func:`mb_lower_bound` given precomputed prefix costs."""
    if k < 2:
        return base
    return np.minimum(base + _bound_terms(tables, prev, last, k), _kernels.INF_I)


def save_tables(tables: MBTables, path) -> None:
    arrays = {"version": np.array(CACHE_VERSION), "n": np.array(tables.n),
              "widths": np.array(tables.layout.widths)}
    for m, tab in enumerate(tables.g):
        for i, t in tab.items():
            arrays[f"g_{m}_{i}"] = t
    np.savez_compressed(path, **arrays)


def load_tables(path) -> MBTables:
    with np.load(path) as z:
        if int(z["version"]) != CACHE_VERSION:
            raise ValueError(f"table cache version {int(z['version'])} != {CACHE_VERSION}")
        n = int(z["n"])
        layout = SegmentLayout(n, tuple(int(w) for w in z["widths"]))
        g = [{i: z[f"g_{m}_{i}"] for i in range(3, n + 2)} for m in range(layout.M)]
    return MBTables(layout, g)


def cached_tables(n: int, M: int = 3, cache_dir=None) -> MBTables:
    """Build tables, reusing ``<cache_dir>/mb_n{n}_M{M}.npz`` when present."""
    layout = segment_layout(n, M)
    if cache_dir is None:
        return build_mb_tables(n, layout)
    path = Path(cache_dir) / f"mb_n{n}_M{M}.npz"
    if path.exists():
        t = load_tables(path)
        if t.layout == layout:
            return t
    t = build_mb_tables(n, layout)
    path.parent.mkdir(parents=True, exist_ok=True)
    save_tables(t, path)
    return t
