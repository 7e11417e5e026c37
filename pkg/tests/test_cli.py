"""Command-line interface: subcommands, formats, exit codes."""

import json

import pytest

from cycalign.cli import main
from cycalign.harness import CSV_HEADER

pytestmark = pytest.mark.filterwarnings("ignore::cycalign.ValidityRegimeWarning")


def test_simulate_prints_summary(capsys):
    code = main(["simulate", "--n", "30", "--k", "3", "--delta", "0.5",
                 "--seed", "3", "--noiseless"])
    out = capsys.readouterr().out
    assert code == 0
    assert "recovered      : yes" in out
    assert "query count" in out


def test_simulate_reports_failure_detail(capsys):
    code = main(["simulate", "--n", "200", "--k", "4", "--delta", "0.2",
                 "--seed", "0"])
    out = capsys.readouterr().out
    assert code == 0
    assert "recovered      : no" in out
    assert "mismatched" in out


def test_sweep_writes_csv(tmp_path, capsys):
    out_path = tmp_path / "sweep.csv"
    code = main(["sweep", "--n", "20,30", "--k", "2", "--delta", "0.45",
                 "--trials", "3", "--seed", "1", "--out", str(out_path)])
    assert code == 0
    lines = out_path.read_text().strip().split("\n")
    assert lines[0] == CSV_HEADER
    assert len(lines) == 3


def test_sweep_stdout_and_json(capsys):
    code = main(["sweep", "--n", "20", "--k", "2", "--delta", "0.45",
                 "--trials", "2", "--seed", "1", "--format", "json",
                 "--no-timing"])
    assert code == 0
    rows = json.loads(capsys.readouterr().out)
    assert rows[0]["n"] == 20 and rows[0]["wall_time_seconds"] == 0.0


def test_sweep_rerun_byte_identical(tmp_path):
    args = ["sweep", "--n", "20", "--k", "2,3", "--delta", "0.45,0.6",
            "--trials", "4", "--seed", "9", "--no-timing"]
    outs = []
    for name in ("a.csv", "b.csv"):
        path = tmp_path / name
        assert main(args + ["--out", str(path)]) == 0
        outs.append(path.read_bytes())
    assert outs[0] == outs[1]


def test_sweep_missing_grid_is_config_error(capsys):
    code = main(["sweep", "--k", "2", "--delta", "0.3", "--trials", "1"])
    assert code == 2
    assert "error:" in capsys.readouterr().err


def test_sweep_bad_trials_is_config_error(capsys):
    code = main(["sweep", "--n", "20", "--k", "2", "--delta", "0.3",
                 "--trials", "0"])
    assert code == 2


def test_unknown_flag_exits_2():
    with pytest.raises(SystemExit) as err:
        main(["sweep", "--bogus", "1"])
    assert err.value.code == 2


def test_internal_error_exits_3(monkeypatch, capsys):
    import cycalign.cli as cli_mod

    def boom(*args, **kwargs):
        raise RuntimeError("synthetic failure")

    monkeypatch.setattr(cli_mod, "run_sweep", boom)
    code = main(["sweep", "--n", "20", "--k", "2", "--delta", "0.45",
                 "--trials", "1"])
    assert code == 3
    assert "synthetic failure" in capsys.readouterr().err


def test_config_file_with_flag_override(tmp_path):
    cfg = tmp_path / "sweep.cfg"
    cfg.write_text("n_values = 20\nk_values = 2\ndelta_values = 0.45\n"
                   "trials = 2\nbase_seed = 5\n")
    out_a = tmp_path / "a.csv"
    out_b = tmp_path / "b.csv"
    assert main(["sweep", "--config", str(cfg), "--out", str(out_a),
                 "--no-timing"]) == 0
    # flag overrides the file's trials value
    assert main(["sweep", "--config", str(cfg), "--trials", "4",
                 "--out", str(out_b), "--no-timing"]) == 0
    assert ",2," in out_a.read_text().split("\n")[1]
    assert ",4," in out_b.read_text().split("\n")[1]


def test_phase_emits_one_record_per_scale(tmp_path):
    out_path = tmp_path / "phase.csv"
    code = main(["phase", "--n", "40", "--k", "2", "--delta", "0.45",
                 "--trials", "2", "--seed", "3",
                 "--budget-scale", "1,0.2", "--out", str(out_path)])
    assert code == 0
    lines = out_path.read_text().strip().split("\n")
    assert len(lines) == 3
    seed_sizes = [int(line.split(",")[4]) for line in lines[1:]]
    assert seed_sizes[0] > seed_sizes[1]


def test_lemma_check_table_and_csv(tmp_path, capsys):
    out_path = tmp_path / "lemma.csv"
    code = main(["lemma-check", "--n", "20,40,60,80,100", "--k", "2",
                 "--delta", "0.3", "--trials", "5000", "--seed", "2",
                 "--out", str(out_path)])
    assert code == 0
    table = capsys.readouterr().out
    assert "fit (large regime)" in table
    lines = out_path.read_text().strip().split("\n")
    assert len(lines) == 6


def test_lemma_check_json(tmp_path, capsys):
    out_path = tmp_path / "lemma.json"
    code = main(["lemma-check", "--n", "20,40", "--k", "2", "--delta", "0.3",
                 "--trials", "1000", "--seed", "2", "--format", "json",
                 "--out", str(out_path)])
    assert code == 0
    payload = json.loads(out_path.read_text())
    assert len(payload["points"]) == 2 and payload["fit"] is None


def test_lemma_check_invalid_delta_is_config_error(capsys):
    code = main(["lemma-check", "--n", "20", "--k", "2", "--delta", "0.9",
                 "--trials", "10"])
    assert code == 2


def test_mle_check_reports_agreement(capsys):
    code = main(["mle-check", "--n", "5", "--k", "2", "--delta", "0.45",
                 "--trials", "20", "--seed", "4"])
    out = capsys.readouterr().out
    assert code == 0
    assert "agreement" in out and "non-unique ML sets" in out


def test_mle_check_oversize_is_config_error(capsys):
    code = main(["mle-check", "--n", "9", "--k", "2", "--delta", "0.45",
                 "--trials", "5"])
    assert code == 2
