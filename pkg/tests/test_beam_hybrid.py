import pytest

from stilllife import _kernels
from stilllife.beam_hybrid import (
    HybridConfig, SearchExhausted, beam_search, complete_randomly, extend_symmetric, hybrid_run,
    select_beam, symmetric_rows,
)
from stilllife.bucket_elim import be_solve, symmetric_domain
from stilllife.life_core import reflect
from stilllife.memetic import MAConfig
from stilllife.wcsp_row import PartialSolution, partial_cost

INF_I = _kernels.INF_I


def test_extend_symmetric():
    root = PartialSolution((), 12)
    kids = extend_symmetric(root)
    assert len(kids) == 64
    p = kids[5]
    for child in extend_symmetric(p):
        r = child.rows[-1]
        assert reflect(r, 12) == r
        assert child.cost >= p.cost
        assert child.cost == partial_cost(child.rows, 12)
    assert set(symmetric_rows(7).tolist()) == set(symmetric_domain(7).values)
    with pytest.raises(ValueError):
        extend_symmetric(PartialSolution((0,) * 3, 3))


def test_select_beam(rng):
    rows = rng.integers(0, 16, size=(50, 3))
    bounds = rng.integers(0, 5, size=50)
    bounds[:10] = INF_I
    costs = bounds.copy()
    beam = select_beam(rows, costs, bounds, 20)
    assert len(beam) == 20
    order = sorted(range(50), key=lambda j: (bounds[j], tuple(rows[j])))[:20]
    assert sorted(beam.bounds.tolist()) == sorted(bounds[order].tolist())
    assert (beam.rows == rows[order]).all()
    assert not beam.all_infinite
    # fewer than k candidates: everything kept, infinite ones last
    beam = select_beam(rows, costs, bounds, 100)
    assert len(beam) == 50 and (beam.bounds[-10:] == INF_I).all()
    beam = select_beam(rows[:10], costs[:10], bounds[:10], 5)
    assert beam.all_infinite and len(beam) == 5
    with pytest.raises(SearchExhausted):
        select_beam(rows[:0], costs[:0], bounds[:0], 5)


def test_complete_randomly(rng):
    b = complete_randomly([1, 2, 3], 3, rng)
    assert b.tolist() == [[1, 0, 0], [0, 1, 0], [1, 1, 0]]
    b = complete_randomly(PartialSolution((5, 0), 6), 6, rng)
    assert b[0].tolist() == [1, 0, 1, 0, 0, 0] and b[1].sum() == 0
    assert complete_randomly([], 8, rng).shape == (8, 8)
    with pytest.raises(ValueError):
        complete_randomly([0] * 4, 3, rng)


@pytest.mark.parametrize("n", [3, 4, 5, 6, 7, 8])
def test_beam_alone_finds_symmetric_optimum(n):
    want = be_solve(n, symmetric_domain(n)).opt
    for bound in ("simple", "minibucket"):
        if bound == "minibucket" and n < 4:
            continue
        cost, board = beam_search(n, 10**6, bound, keep_infeasible=n <= 5)
        assert cost == want


def test_config():
    cfg = HybridConfig(n=12)
    assert cfg.k_ma == 9 and cfg.ma.arity == 4 and cfg.bound == "minibucket"
    assert HybridConfig(n=12, bound="simple").ma.arity == 2
    assert HybridConfig(n=12, bound="mb").bound == "minibucket"
    with pytest.raises(ValueError):
        HybridConfig(n=12, k_ma_fraction=0)
    with pytest.raises(ValueError):
        HybridConfig(n=12, k_bw=10)
    with pytest.raises(ValueError):
        HybridConfig(n=12, bound="exact")


def test_single_ma_call_at_full_fraction():
    ma = MAConfig(n=8, popsize=10)
    best, trace, info = hybrid_run(HybridConfig(n=8, k_bw=50, k_ma_fraction=1.0, ma=ma,
                                                ma_generations=20, bound="simple"))
    assert info["ma_runs"] == 1
    assert best.fit >= 28


def test_hybrid_small_and_deterministic():
    ma = MAConfig(n=8, popsize=10, arity=2)
    cfg = HybridConfig(n=8, k_bw=200, k_ma_fraction=0.5, ma=ma, ma_generations=30,
                       bound="minibucket", seed=3)
    a = hybrid_run(cfg)
    b = hybrid_run(cfg)
    assert a[0].fit == b[0].fit == 28
    assert [(e.generation, e.cost) for e in a[1]] == [(e.generation, e.cost) for e in b[1]]
    costs = [e.cost for e in a[1]]
    assert costs == sorted(costs, reverse=True)
    assert a[2]["ma_runs"] == 8 - 4 + 1


def test_hybrid_n12_reaches_68():
    best, trace, info = hybrid_run(HybridConfig(n=12, seed=0, target=68))
    assert best.fit == 68
