import json

from omcomb import BASELINE
from omcomb.cli import main

CHEAP_SOLVER = {"settle_periods": 2.0, "steps_per_period": 80, "record_periods": 2}


def write_config(path, **overrides):
    doc = dict(BASELINE)
    doc.update(overrides)
    path.write_text(json.dumps(doc))
    return path


def read_metrics(path):
    out = {}
    for line in path.read_text().splitlines():
        key, _, value = line.partition("=")
        out[key] = value
    return out


def test_run_probes_off_single_present_line(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", record_periods=2)
    rc = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert rc == 0
    out = tmp_path / "out"
    assert (out / "spectrum.csv").exists()
    assert (out / "spectrum.png").exists()
    metrics = read_metrics(out / "metrics.txt")
    assert metrics["present_ks"] == "0"
    assert metrics["lines_present"] == "1"
    assert float(metrics["parseval_rel_err"]) < 1e-6
    assert float(metrics["leakage_floor_rel"]) < 1e-8


def test_repeated_runs_are_byte_identical(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", eps_p=9.0, **CHEAP_SOLVER)
    for sub in ("a", "b"):
        rc = main(["run", "--config", str(cfg), "--out", str(tmp_path / sub)])
        assert rc == 0
    assert ((tmp_path / "a" / "spectrum.csv").read_bytes()
            == (tmp_path / "b" / "spectrum.csv").read_bytes())
    assert ((tmp_path / "a" / "metrics.txt").read_bytes()
            == (tmp_path / "b" / "metrics.txt").read_bytes())


def test_threshold_flag_overrides_config(tmp_path):
    cfg = write_config(tmp_path / "cfg.json", eps_p=9.0, **CHEAP_SOLVER)
    rc = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out"),
               "--threshold", "1e-2"])
    assert rc == 0
    metrics = read_metrics(tmp_path / "out" / "metrics.txt")
    assert float(metrics["threshold_rel"]) == 1e-2


def test_invalid_config_gives_machine_readable_error(tmp_path, capsys):
    cfg = write_config(tmp_path / "cfg.json", n=0)
    rc = main(["run", "--config", str(cfg), "--out", str(tmp_path / "out")])
    assert rc != 0
    err = capsys.readouterr().err.strip().splitlines()[-1]
    payload = json.loads(err)
    assert payload["error"] == "ParameterError"
    assert "n" in payload["message"]


def test_unknown_preset_rejected(tmp_path, capsys):
    rc = main(["run", "--preset", "nope", "--out", str(tmp_path)])
    assert rc == 2
    payload = json.loads(capsys.readouterr().err.strip().splitlines()[-1])
    assert payload["error"] == "ConfigError"


def test_steady_prints_branch_table(capsys, tmp_path):
    rc = main(["steady", "--preset", "baseline"])
    assert rc == 0
    out = capsys.readouterr().out
    assert "intensity" in out
    assert "True" in out


class TestSweep:
    def test_rows_follow_input_order_and_survive_row_errors(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", **CHEAP_SOLVER)
        rc = main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "s"),
                   "--axis", "eps_p", "--values", "9,-1,0"])
        assert rc == 0
        rows = (tmp_path / "s" / "sweep.csv").read_text().splitlines()
        assert rows[0].startswith("axis,value,cutoff_neg,cutoff_pos")
        assert len(rows) == 4
        assert rows[1].split(",")[1] == "9.0"
        assert "ParameterError" in rows[2]          # negative amplitude, in-row
        assert rows[3].split(",")[-1] == ""          # eps_p = 0 still runs
        assert (tmp_path / "s" / "sweep.png").exists()

    def test_all_drives_dark_row_is_degenerate_not_fatal(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", eps_c=0.0, **CHEAP_SOLVER)
        rc = main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "s"),
                   "--axis", "eps_p", "--values", "0,9"])
        assert rc == 0
        rows = (tmp_path / "s" / "sweep.csv").read_text().splitlines()
        assert "EmptySpectrumError" in rows[1]
        assert rows[2].split(",")[-1] == ""          # second row unaffected

    def test_permuting_values_permutes_rows_identically(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", **CHEAP_SOLVER)
        def rows_for(values, sub):
            rc = main(["sweep", "--config", str(cfg), "--out", str(tmp_path / sub),
                       "--axis", "eps_p", "--values", values])
            assert rc == 0
            lines = (tmp_path / sub / "sweep.csv").read_text().splitlines()
            return lines[1:]
        fwd = rows_for("0,9", "f")
        rev = rows_for("9,0", "r")
        assert fwd == rev[::-1]

    def test_integer_axis(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.json", eps_p=9.0, eps_f=0.9, **CHEAP_SOLVER)
        rc = main(["sweep", "--config", str(cfg), "--out", str(tmp_path / "s"),
                   "--axis", "n", "--values", "2,5"])
        assert rc == 0
        rows = (tmp_path / "s" / "sweep.csv").read_text().splitlines()
        assert rows[1].split(",")[1] == "2"
        assert rows[2].split(",")[1] == "5"


def test_oracle_report_small_deviation(tmp_path, capsys):
    rc = main(["oracle", "--preset", "baseline", "--out", str(tmp_path),
               "--ratios", "1e-3"])
    assert rc == 0
    rows = (tmp_path / "oracle.csv").read_text().splitlines()
    assert len(rows) == 2
    rel_dev = float(rows[1].split(",")[5])
    assert rel_dev < 1e-3
