import itertools

import pytest

from stilllife.bucket_elim import be_solve, full_domain
from stilllife.life_core import board_to_rows
from stilllife.minibucket import (
    build_mb_tables, cached_tables, f_cell, f_segment, load_tables, mb_lower_bound,
    save_tables, segment_layout,
)
from stilllife.oracle import exhaustive_best_completion
from stilllife.wcsp_row import INF, f1, fi, fn_, partial_cost


def test_layout_examples():
    assert segment_layout(12).widths == (4, 4, 4)
    assert segment_layout(13).widths == (4, 5, 4)
    assert segment_layout(14).widths == (5, 4, 5)
    for n in range(6, 33):
        lay = segment_layout(n)
        assert sum(lay.widths) == n
        assert lay.widths == lay.widths[::-1]
        assert max(lay.widths) - min(lay.widths) <= 1
    with pytest.raises(ValueError):
        segment_layout(5, 3)


def test_scopes():
    lay = segment_layout(12)
    assert [lay.owned(m) for m in range(3)] == [(1, 4), (5, 8), (9, 12)]
    assert [lay.scope(m) for m in range(3)] == [(1, 5), (4, 9), (8, 12)]
    assert segment_layout(6).scope_width(1) == 4


def test_f_cell():
    assert f_cell(1, 2) == 0
    assert f_cell(0, 3) == INF
    assert f_cell(0, 0) == 1
    assert f_cell(1, 4) == INF


def _meta_parts(a, b, c, lay):
    return [(lay.meta(a, m), lay.meta(b, m), lay.meta(c, m)) for m in range(lay.M)]


def test_segments_sum_to_row_cost_exhaustively():
    """On n = 6 the segment costs add up to the row cost, or some segment is INF."""
    n = 6
    lay = segment_layout(n)
    for a, b, c in itertools.product(range(1 << n), repeat=3):
        parts = [f_segment(x, y, z, "interior", m, lay)
                 for m, (x, y, z) in enumerate(_meta_parts(a, b, c, lay))]
        assert sum(parts) == fi(a, b, c, n)
    for b, c in itertools.product(range(1 << n), repeat=2):
        parts = [f_segment(0, y, z, "first", m, lay)
                 for m, (_, y, z) in enumerate(_meta_parts(0, b, c, lay))]
        assert sum(parts) == f1(b, c, n)
        parts = [f_segment(x, y, 0, "last", m, lay)
                 for m, (x, y, _) in enumerate(_meta_parts(b, c, 0, lay))]
        assert sum(parts) == fn_(b, c, n)


def test_f_segment_examples():
    lay = segment_layout(12)
    assert f_segment(0, 0, 0, "interior", 0, lay) == 4
    assert f_segment(0, 0b00100, 0, "interior", 0, lay) == INF
    with pytest.raises(ValueError):
        f_segment(0, 1 << 7, 0, "interior", 0, lay)
    with pytest.raises(ValueError):
        f_segment(0, 0, 0, "middle", 0, lay)


def test_tables_shape_and_sign():
    t = build_mb_tables(6)
    assert t.g[1][4].shape == (16, 16)
    for tab in t.g:
        assert set(tab) == set(range(3, 8))
        assert all((g >= 0).all() for g in tab.values())
    assert (t.table(0, 7) >= 0).all()


def test_infinite_entries_have_no_stable_strip():
    """g[m][i][a, b] is INF exactly when no strip below (a, b) is stable."""
    n = 6
    lay = segment_layout(n)
    t = build_mb_tables(n)
    for m in range(lay.M):
        sw = lay.scope_width(m)
        # brute force over strips of the remaining rows for the table at i = n
        g = t.table(m, n)
        for x, y in itertools.product(range(1 << sw), repeat=2):
            best = INF
            for z in range(1 << sw):
                v = f_segment(x, y, z, "interior", m, lay)
                if v != INF:
                    v += f_segment(y, z, 0, "last", m, lay)
                best = min(best, v)
            assert (g[x, y] >= 1 << 30) == (best == INF)
            if best != INF:
                assert g[x, y] == best


def test_bound_examples():
    n = 8
    t = build_mb_tables(n, segment_layout(n, 3))
    opt = be_solve(n, full_domain(n)).board
    rows = board_to_rows(opt)
    for k in range(n + 1):
        lb = mb_lower_bound(rows[:k], t)
        assert partial_cost(rows[:k], n) <= lb <= 28
    assert mb_lower_bound(rows, t) == 28


def test_bound_admissible_random(rng):
    n = 6
    t = build_mb_tables(n)
    hits = 0
    for _ in range(3000):
        k = int(rng.integers(0, n + 1))
        rows = [int(r) for r in rng.integers(0, 1 << n, size=k)]
        if partial_cost(rows, n) == INF:
            continue
        hits += 1
        lb = mb_lower_bound(rows, t)
        assert partial_cost(rows, n) <= lb
        assert lb <= exhaustive_best_completion(rows, n)
    assert hits > 100


def test_cache_round_trip(tmp_path):
    t = cached_tables(7, 3, tmp_path)
    path = tmp_path / "mb_n7_M3.npz"
    assert path.exists()
    again = cached_tables(7, 3, tmp_path)
    for m in range(3):
        for i in t.g[m]:
            assert (t.g[m][i] == again.g[m][i]).all()
    save_tables(t, tmp_path / "x.npz")
    assert load_tables(tmp_path / "x.npz").layout == t.layout
