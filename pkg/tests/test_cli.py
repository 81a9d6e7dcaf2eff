import subprocess
import sys

import pytest

from season_forecast import data_io
from season_forecast.cli import main
from season_forecast.forecast import predict_one_step
from season_forecast.preproc import season_membership

FAST = ["--epochs", "300", "--lr", "0.5"]


@pytest.fixture
def series_csv(tmp_path):
    path = tmp_path / "series.csv"
    assert main(["synth", "--out", str(path), "--seed", "3"]) == 0
    return path


def train_model(tmp_path, series_csv, *extra):
    model = tmp_path / "model.json"
    assert main(["train", str(series_csv), "--out", str(model), *FAST, *extra]) == 0
    return model


class TestSynth:
    def test_writes_22_months(self, series_csv):
        s = data_io.load_series(series_csv)
        assert len(s) == 22 and str(s.start) == "2002-01"

    def test_options(self, tmp_path):
        out = tmp_path / "s.csv"
        assert main(["synth", "-o", str(out), "--noise-sd", "0", "--months", "12",
                     "--start-year", "2010", "--start-month", "7"]) == 0
        s = data_io.load_series(out)
        assert str(s.start) == "2010-07" and s.values[0] == 190000.0


class TestTrain:
    def test_with_seasons_width_6(self, tmp_path, series_csv, capsys):
        model = train_model(tmp_path, series_csv, "--with-seasons")
        assert data_io.load_model(model).net.n_inputs == 6
        assert "test_mse=" in capsys.readouterr().out

    def test_no_seasons_width_4(self, tmp_path, series_csv):
        model = train_model(tmp_path, series_csv, "--no-seasons")
        m = data_io.load_model(model)
        assert m.net.n_inputs == 4 and not m.seasons

    def test_report_csv(self, tmp_path, series_csv):
        report = tmp_path / "r.csv"
        train_model(tmp_path, series_csv, "--report", str(report))
        lines = report.read_text().splitlines()
        assert lines[0] == "epoch,mse" and len(lines) == 301

    def test_missing_series(self, tmp_path, capsys):
        model = tmp_path / "model.json"
        assert main(["train", str(tmp_path / "nope.csv"), "--out", str(model)]) == 2
        assert not model.exists()
        assert "nope.csv" in capsys.readouterr().err

    def test_config_file_and_flag_precedence(self, tmp_path, series_csv, monkeypatch):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("epochs = 20\nhidden = 3,2\nkind = elman\nlr = 0.1\n")
        monkeypatch.setenv(data_io.CONFIG_ENV, str(cfg))
        model = tmp_path / "m.json"
        assert main(["train", str(series_csv), "-o", str(model), "--hidden", "5,2"]) == 0
        m = data_io.load_model(model)
        assert m.kind == "elman" and m.net.layer_sizes == [6, 5, 2, 1]
        assert m.trainer["epochs"] == 20

    def test_bad_config(self, tmp_path, series_csv, capsys):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("lr = -1\n")
        assert main(["train", str(series_csv), "-o", str(tmp_path / "m"), "--config",
                     str(cfg)]) == 1
        assert "lr" in capsys.readouterr().err


class TestPredict:
    def test_one_step_csv(self, tmp_path, series_csv):
        model = train_model(tmp_path, series_csv)
        out = tmp_path / "p.csv"
        assert main(["predict", str(model), str(series_csv), "-o", str(out)]) == 0
        res = data_io.load_forecast(out)
        assert len(res) == 18 and res.mode == "one-step"
        assert str(res.months[0]) == "2002-05"


class TestMultistep:
    def test_27_month_horizon(self, tmp_path, series_csv):
        model = train_model(tmp_path, series_csv)
        out = tmp_path / "ms.csv"
        assert main(["multistep", str(model), str(series_csv), "--horizon", "27",
                     "-o", str(out)]) == 0
        lines = out.read_text().splitlines()
        assert len(lines) == 28
        assert lines[1].startswith("2002,5,") and lines[-1].startswith("2004,7,")
        assert lines[-1].endswith(",multi-step")

    def test_horizon_one_is_one_step(self, tmp_path, series_csv):
        model = train_model(tmp_path, series_csv)
        out = tmp_path / "ms.csv"
        assert main(["multistep", str(model), str(series_csv), "--horizon", "1",
                     "-o", str(out)]) == 0
        net = data_io.load_model(model).net
        seed = [v / 5e5 for v in data_io.load_series(series_csv).values[:4]]
        expected = predict_one_step(net, seed, season_membership(5))
        assert data_io.load_forecast(out).scaled[0] == expected

    def test_horizon_zero_usage_error(self, tmp_path, series_csv, capsys):
        model = train_model(tmp_path, series_csv)
        out = tmp_path / "ms.csv"
        assert main(["multistep", str(model), str(series_csv), "--horizon", "0",
                     "-o", str(out)]) == 2
        assert not out.exists()
        assert "horizon" in capsys.readouterr().err

    def test_series_too_short(self, tmp_path, series_csv):
        model = train_model(tmp_path, series_csv)
        short = tmp_path / "short.csv"
        short.write_text("year,month,value_mwh\n2002,1,250000\n2002,2,250000\n")
        assert main(["multistep", str(model), str(short), "--horizon", "3",
                     "-o", str(tmp_path / "o.csv")]) == 1


class TestSweep:
    def test_two_topologies(self, tmp_path, series_csv):
        out = tmp_path / "sw.csv"
        assert main(["sweep", str(series_csv), "--hidden-sizes", "8,4;4,2", "-o", str(out),
                     *FAST]) == 0
        lines = out.read_text().splitlines()
        assert lines[0] == "topology,train_mse,test_mse"
        assert {l.split(",")[0] for l in lines[1:]} == {"6-8-4-1", "6-4-2-1"}
        test_mse = [float(l.split(",")[2]) for l in lines[1:]]
        assert test_mse == sorted(test_mse)

    def test_duplicate_topology_identical_rows(self, tmp_path, series_csv):
        out = tmp_path / "sw.csv"
        assert main(["sweep", str(series_csv), "--hidden-sizes", "4,2;4,2", "-o", str(out),
                     *FAST]) == 0
        rows = out.read_text().splitlines()[1:]
        assert rows[0] == rows[1]

    def test_parallel_matches_serial(self, tmp_path, series_csv):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["sweep", str(series_csv), "--hidden-sizes", "4,2;3,3", *FAST]
        assert main([*args, "-o", str(a)]) == 0
        assert main([*args, "-o", str(b), "--jobs", "2"]) == 0
        assert a.read_bytes() == b.read_bytes()

    def test_needs_two(self, tmp_path, series_csv):
        assert main(["sweep", str(series_csv), "--hidden-sizes", "8,4",
                     "-o", str(tmp_path / "x.csv")]) == 2


def test_module_entry_point(tmp_path):
    out = tmp_path / "s.csv"
    proc = subprocess.run([sys.executable, "-m", "season_forecast", "synth", "-o", str(out)],
                          capture_output=True, text=True)
    assert proc.returncode == 0 and proc.stderr == ""
    assert out.read_text().startswith("year,month,value_mwh\n")


def test_missing_subcommand():
    with pytest.raises(SystemExit) as err:
        main([])
    assert err.value.code == 2
