import csv
import math

import numpy as np
import pytest

from opadapt.harness import cli
from opadapt.harness.analysis import analyze, write_report
from opadapt.harness.campaign import (
    CSV_HEADER, CampaignConfig, ConfigError, parse_config, read_records, run_campaign,
)
from opadapt.harness.designs import DESIGN_NAMES, DESIGNS, get_design
from opadapt.harness.runner import RunRecord, derive_seed, run_design, stopping_points


def test_designs():
    assert len(DESIGN_NAMES) == 9
    sga1 = get_design("sga1").initial_probabilities()
    assert sga1[3] == 0.98 and sga1[9] == 0.02 and sga1.sum() == pytest.approx(1.0)
    assert np.allclose(get_design("A5-I3").initial_probabilities(), 0.1)
    assert not DESIGNS["SGA2"].adaptive and DESIGNS["A6-I3"].adaptive
    assert (DESIGNS["A2-I1"].measurement, DESIGNS["A2-I1"].interpretation) == ("A2", "I1")
    with pytest.raises(KeyError):
        get_design("A3-I1")


def test_seed_derivation_is_stable_and_isolated():
    s = derive_seed(2006, "SGA1", "F2", 0)
    assert s == derive_seed(2006, "SGA1", "F2", 0)
    assert 0 <= s < 2**64
    others = {derive_seed(2006, d, "F2", 0) for d in DESIGN_NAMES}
    assert len(others) == 9
    assert derive_seed(2007, "SGA1", "F2", 0) != s


def test_stopping_points():
    assert stopping_points(2000, 100) == list(range(100, 2001, 100))
    with pytest.raises(ValueError):
        stopping_points(250, 100)


def test_parse_config():
    cfg = parse_config("""
        # comment
        design = sga1
        design = A5-I3   # trailing comment
        problem = f2
        runs = 3
        generations = 200
        interval = 100
        seed = 7
        out = somewhere
        family = lognormal
    """)
    assert cfg.designs == ("SGA1", "A5-I3") and cfg.problems == ("F2",)
    assert (cfg.runs_per_cell, cfg.max_generations, cfg.master_seed) == (3, 200, 7)
    assert str(cfg.output_directory) == "somewhere"
    assert list(cfg.cells())[:2] == [("SGA1", "F2", 0), ("SGA1", "F2", 1)]


@pytest.mark.parametrize("text", [
    "runs = x", "bogus = 1", "no equals sign", "design = A9-I9",
    "problem = F11", "generations = 250\ninterval = 100", "runs = 0",
])
def test_bad_configs(text):
    with pytest.raises(ConfigError):
        parse_config(text)


def _small_config(tmp_path, **kw):
    base = dict(designs=("SGA1",), problems=("F5",), runs_per_cell=2, max_generations=200,
                stopping_interval=100, master_seed=1, output_directory=tmp_path)
    base.update(kw)
    return CampaignConfig(**base)


def test_row_count_and_schema(tmp_path):
    records = run_campaign(_small_config(tmp_path))
    assert len(records) == 2
    lines = (tmp_path / "runs.csv").read_text().splitlines()
    assert lines[0] == ",".join(CSV_HEADER)
    assert len(lines) == 1 + 4
    row = next(csv.DictReader(lines))
    assert float(row["best_fitness"]) <= 0.0
    assert row["solved"] in {"0", "1"}
    assert int(row["seed"]) == derive_seed(1, "SGA1", "F5", 0)


def test_same_seed_byte_identical(tmp_path):
    a, b = tmp_path / "a", tmp_path / "b"
    run_campaign(_small_config(a, designs=("SGA2", "A6-I3")))
    run_campaign(_small_config(b, designs=("SGA2", "A6-I3")))
    assert (a / "runs.csv").read_bytes() == (b / "runs.csv").read_bytes()


def test_records_round_trip(tmp_path):
    recs = run_campaign(_small_config(tmp_path, designs=("SGA1", "A1-I1")))
    back = {(r.design, r.run_index): r for r in read_records([tmp_path])}
    for r in recs:
        assert back[r.design, r.run_index].best_fitness_at == r.best_fitness_at


def test_dumps(tmp_path):
    run_campaign(_small_config(tmp_path, designs=("A5-I3",), runs_per_cell=1,
                               dump_probabilities=True, dump_measurements=True))
    probs = (tmp_path / "probabilities" / "A5-I3_F5_0.csv").read_text().splitlines()
    assert probs[0] == "generation,op_id,probability"
    assert len(probs) == 1 + 10 * (1 + 200 // 20)
    meas = (tmp_path / "measurements" / "A5-I3_F5_0.csv").read_text().splitlines()
    assert meas[0] == "generation,operator_id,kind,value" and len(meas) > 1


def test_best_fitness_monotone_and_solved():
    res = run_design("A6-I3", "F5", 3, 400, 20)
    values = [res.record.best_fitness_at[s] for s in stopping_points(400, 20)]
    assert values == sorted(values)
    assert res.update_generations == list(range(20, 401, 20))


@pytest.mark.slow
def test_sga1_smoke_full_budget():
    for run in range(10):
        rec = run_design("SGA1", "F5", derive_seed(0, "SGA1", "F5", run), 2000, 100).record
        assert sorted(rec.best_fitness_at) == list(range(100, 2001, 100))
        assert all(v <= 0.0 for v in rec.best_fitness_at.values())


def _records(samples_by_design, stops=(100, 200, 300)):
    out = []
    for design, per_stop in samples_by_design.items():
        for run in range(len(per_stop[0])):
            r = RunRecord(design, "F1", run, run)
            r.best_fitness_at = {s: per_stop[i][run] for i, s in enumerate(stops)}
            out.append(r)
    return out


def test_analyze_identical_designs():
    same = [[-1.0, -2.0, -3.0]] * 3
    rep = analyze(_records({"SGA1": same, "SGA2": same}))
    for d in ("SGA1", "SGA2"):
        c = rep.cells[d, "F1"]
        assert c.mean == 0.5 and c.final == 0.5


def test_analyze_dominance_and_rising_correlation():
    base = [[-10.0 - i for i in range(5)]] * 3
    strong = [[-float(i) * 0.01 for i in range(5)]] * 3
    # rival drifts from overlapping SGA1 to dominating it
    rising = [[-12.0 + i for i in range(5)], [-9.0 - i * 0.1 for i in range(5)], [-1.0 - i * 0.1 for i in range(5)]]
    rep = analyze(_records({"SGA1": base, "SGA2": strong, "A5-I3": rising}))
    assert rep.cells["SGA2", "F1"].mean > 0.9
    assert rep.cells["A5-I3", "F1"].correlation > 0
    assert rep.median_correlation("A5-I3") > 0


def test_analyze_without_baseline(caplog):
    same = [[-1.0, -2.0]] * 3
    rep = analyze(_records({"SGA2": same, "A5-I3": same}))
    assert not rep.has_baseline
    assert math.isnan(rep.cells["SGA2", "F1"].correlation)
    assert "Correlation section omitted" in caplog.text


def test_analyze_errors():
    with pytest.raises(ValueError):
        analyze([])
    with pytest.raises(ValueError):
        analyze(_records({"SGA1": [[-1.0]] * 3}))


def test_write_report(tmp_path):
    rep = analyze(_records({"SGA1": [[-1.0, -3.0]] * 3, "SGA2": [[-2.0, -0.5]] * 3}))
    names = {p.name for p in write_report(rep, tmp_path)}
    assert {"measures.csv", "confidence_series.csv", "boxplot_mean.csv", "boxplot_final.csv",
            "boxplot_correlation.csv"} <= names


def test_cli_list_problems(capsys):
    assert cli.main(["list-problems"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert len(lines) == 1 + 10


def test_cli_list_operators(capsys):
    assert cli.main(["list-operators"]) == 0
    assert len(capsys.readouterr().out.strip().splitlines()) == 11


def test_cli_missing_config(tmp_path):
    assert cli.main(["run", "--config", str(tmp_path / "missing.file")]) == 2


def test_cli_malformed_config(tmp_path):
    bad = tmp_path / "bad.cfg"
    bad.write_text("runs = many\n")
    assert cli.main(["run", "--config", str(bad)]) == 1


def test_cli_bad_flags():
    with pytest.raises(SystemExit) as exc:
        cli.main(["run", "--nope"])
    assert exc.value.code == 1
    with pytest.raises(SystemExit) as exc:
        cli.main(["frobnicate"])
    assert exc.value.code == 1


def test_cli_run_then_analyze(tmp_path, capsys):
    cfg = tmp_path / "c.cfg"
    cfg.write_text("design = SGA1\ndesign = SGA2\nproblem = F5\nproblem = F1\n"
                   "runs = 2\ngenerations = 200\ninterval = 100\n")
    out = tmp_path / "out"
    assert cli.main(["run", "--config", str(cfg), "--out", str(out), "--seed", "3"]) == 0
    assert len((out / "runs.csv").read_text().splitlines()) == 1 + 2 * 2 * 2 * 2
    assert cli.main(["analyze", str(out), "--out", str(tmp_path / "rep")]) == 0
    text = capsys.readouterr().out
    assert "Mean" in text and "Final" in text and "Corr" in text
    assert (tmp_path / "rep" / "measures.csv").exists()


def test_cli_analyze_missing_input(tmp_path):
    assert cli.main(["analyze", str(tmp_path / "nothing.csv")]) == 2


def test_cli_demo(capsys):
    assert cli.main(["demo", "--design", "A5-I3", "--problem", "F5", "--generations", "40"]) == 0
    out = capsys.readouterr().out
    assert "gen    20" in out and "best fitness" in out
