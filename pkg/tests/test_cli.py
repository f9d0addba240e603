import json

import pytest

from stilllife.cli import RunRecord, build_parser, default_ma_time, main
from stilllife.wcsp_row import INF


def _records(path):
    return [RunRecord.from_json(ln) for ln in path.read_text().splitlines()]


def test_exact(tmp_path, capsys):
    assert main(["exact", "--n", "12", "--domain", "symmetric", "--out", str(tmp_path)]) == 0
    assert "cost=68" in capsys.readouterr().out
    assert main(["exact", "--n", "3", "--domain", "full", "--out", str(tmp_path)]) == 0
    recs = _records(tmp_path / "results.jsonl")
    assert [r.best_cost for r in recs] == [68, 3]
    assert all(r.validate() for r in recs)
    assert (tmp_path / "exact_n12_seedNone.rle").exists()
    assert recs[0].schema_version == 1


def test_exact_guard(tmp_path, capsys):
    assert main(["exact", "--n", "12", "--domain", "full", "--out", str(tmp_path)]) == 2
    assert "--allow-large" in capsys.readouterr().err


def test_ma_defaults_and_replicates(tmp_path, monkeypatch):
    monkeypatch.setenv("STILLLIFE_OUTPUT_DIR", str(tmp_path))
    args = build_parser().parse_args(["ma", "--n", "12"])
    assert (args.popsize, args.px, args.pm, args.arity, args.variant) == (100, 0.9, None, 2, "be")
    assert default_ma_time(12) == 180 and default_ma_time(20) == 660
    argv = ["ma", "--n", "7", "--variant", "be", "--arity", "4", "--popsize", "10",
            "--generations", "20", "--replicates", "2", "--seed", "5", "--quiet"]
    assert main(argv) == 0
    assert main(argv) == 0
    recs = _records(tmp_path / "results.jsonl")
    assert len(recs) == 4
    assert recs[0].config["p_m"] == 1 / 49 and recs[0].config["arity"] == 4
    assert [r.seed for r in recs] == [5, 6, 5, 6]
    # same seed, same outcome
    assert recs[0].board == recs[2].board and recs[0].best_cost == recs[2].best_cost
    assert all(r.validate() for r in recs)


def test_hybrid(tmp_path):
    assert main(["hybrid", "--n", "12", "--bound", "mb", "--target", "68", "--quiet",
                 "--out", str(tmp_path)]) == 0
    rec = _records(tmp_path / "results.jsonl")[0]
    assert rec.best_cost == 68 and rec.validate()
    assert rec.config["k_ma_fraction"] == 0.75 and rec.config["ma"]["arity"] == 4
    costs = [c for _, c in rec.trace]
    assert costs == sorted(costs, reverse=True)


@pytest.mark.parametrize("frac", ["0.3", "0.5", "0.75"])
def test_hybrid_flags_parse(frac):
    args = build_parser().parse_args(["hybrid", "--n", "20", "--bound", "simple",
                                      "--kma-frac", frac])
    assert args.kma_frac == float(frac) and args.kbw == 2000


def test_large_configs_parse():
    for n in (17, 20, 22, 28):
        build_parser().parse_args(["hybrid", "--n", str(n), "--bound", "mb"])
        build_parser().parse_args(["ma", "--n", str(n), "--variant", "be_2f", "--arity", "16"])


def test_record_round_trip():
    rec = RunRecord("x", {"n": 3}, 1, INF, False, None, None, 0.0, 1.0, [])
    back = RunRecord.from_json(rec.to_json())
    assert back.best_cost == INF and back.validate()
    bad = json.loads(rec.to_json())
    bad["schema_version"] = 99
    with pytest.raises(ValueError):
        RunRecord.from_json(json.dumps(bad))


def test_summary(tmp_path, capsys):
    main(["exact", "--n", "6", "--domain", "full", "--out", str(tmp_path), "--quiet"])
    main(["exact", "--n", "6", "--domain", "symmetric", "--out", str(tmp_path), "--quiet"])
    capsys.readouterr()
    assert main(["summary", str(tmp_path / "results.jsonl")]) == 0
    out = capsys.readouterr().out
    assert "median" in out and "exact" in out


def test_verify_quick(capsys):
    assert main(["verify", "--quick"]) == 0
    out = capsys.readouterr().out
    assert out.count("PASS") == 7 and "all suites passed" in out
