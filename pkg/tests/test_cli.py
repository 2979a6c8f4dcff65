import csv
import math
import os

import pytest
import yaml

from laneflock.cli import main


def write_config(path, **extra):
    data = {"scenario": {"duration": 5.0}, "runs": 1, "nb": 3}
    data.update(extra)
    with open(path, "w") as fh:
        yaml.safe_dump(data, fh)
    return str(path)


class TestSimulate:
    def test_writes_expected_outputs(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "cfg.yaml")
        out = tmp_path / "out"
        rc = main(["simulate", "--config", cfg, "--out", str(out)])
        assert rc == 0
        for name in ("effective_config.yaml", "samples_3.csv",
                     "summary_3.json", "summary_3.csv"):
            assert (out / name).is_file(), name
        table = capsys.readouterr().out
        assert "Ego-Right" in table

    def test_nb_override_labels_outputs(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.yaml")
        out = tmp_path / "out"
        rc = main(["simulate", "--config", cfg, "--out", str(out), "--nb", "4"])
        assert rc == 0
        assert (out / "samples_4.csv").is_file()

    def test_dump_ground_truth(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.yaml")
        out = tmp_path / "out"
        rc = main(["simulate", "--config", cfg, "--out", str(out),
                   "--dump-ground-truth"])
        assert rc == 0
        assert (out / "ground_truth.csv").is_file()

    def test_defaults_without_config_file(self, tmp_path):
        out = tmp_path / "out"
        rc = main(["simulate", "--runs", "1", "--out", str(out)])
        # full default duration; just ensure the invocation is accepted
        assert rc == 0
        assert (out / "samples_7.csv").is_file()

    def test_missing_config_exits_2(self, tmp_path, capsys):
        rc = main(["simulate", "--config", str(tmp_path / "nope.yaml")])
        assert rc == 2
        assert "error" in capsys.readouterr().err

    def test_invalid_config_exits_2(self, tmp_path, capsys):
        path = tmp_path / "bad.yaml"
        with open(path, "w") as fh:
            yaml.safe_dump({"bogus": 1}, fh)
        rc = main(["simulate", "--config", str(path)])
        assert rc == 2
        assert "unknown key" in capsys.readouterr().err


class TestSweep:
    def test_writes_comparison_and_per_nb_outputs(self, tmp_path):
        cfg = write_config(tmp_path / "cfg.yaml")
        out = tmp_path / "out"
        rc = main(["sweep", "--config", cfg, "--out", str(out),
                   "--nb-list", "2,3"])
        assert rc == 0
        assert (out / "comparison.csv").is_file()
        for nb in (2, 3):
            assert (out / f"samples_{nb}.csv").is_file()
            assert (out / f"summary_{nb}.json").is_file()
        with open(out / "comparison.csv", newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0][0] == "pair"
        assert {r[2] for r in rows[1:]} == {"2", "3"}

    def test_repeat_runs_byte_identical(self, tmp_path, monkeypatch):
        cfg = write_config(tmp_path / "cfg.yaml")
        dirs = []
        for sub in ("a", "b"):
            workdir = tmp_path / sub
            workdir.mkdir()
            monkeypatch.chdir(workdir)
            assert main(["sweep", "--config", cfg, "--out", "out",
                         "--nb-list", "2,3"]) == 0
            dirs.append(workdir / "out")
        out_a, out_b = dirs
        names = sorted(os.listdir(out_a))
        assert names == sorted(os.listdir(out_b))
        for name in names:
            assert (out_a / name).read_bytes() == (out_b / name).read_bytes(), \
                name


class TestDubins:
    def test_straight_line_report(self, capsys):
        rc = main(["dubins", "0", "0", "0", "100", "0", "0", "--radius", "60"])
        assert rc == 0
        out = capsys.readouterr().out
        assert "length: 100.000000" in out
        assert "reachable: yes" in out

    def test_point_behind_unreachable(self, capsys):
        rc = main(["dubins", "0", "0", "0", "-2", "0", "0", "--radius", "60"])
        assert rc == 0
        assert "reachable: no" in capsys.readouterr().out

    def test_polyline_export(self, tmp_path, capsys):
        out = tmp_path / "path.csv"
        rc = main(["dubins", "0", "0", "0", "0", "-120", str(math.pi),
                   "--radius", "60", "--out", str(out)])
        assert rc == 0
        with open(out, newline="") as fh:
            rows = list(csv.reader(fh))
        assert rows[0] == ["x", "y", "heading"]
        x, y, _ = map(float, rows[-1])
        assert x == pytest.approx(0.0, abs=1e-5)
        assert y == pytest.approx(-120.0, abs=1e-5)

    def test_bad_radius_exits_2(self, capsys):
        rc = main(["dubins", "0", "0", "0", "1", "0", "0", "--radius", "0"])
        assert rc == 2
        assert "radius" in capsys.readouterr().err


class TestStats:
    def test_resummarize_samples(self, tmp_path, capsys):
        cfg = write_config(tmp_path / "cfg.yaml")
        out = tmp_path / "out"
        main(["simulate", "--config", cfg, "--out", str(out)])
        capsys.readouterr()
        rc = main(["stats", str(out / "samples_3.csv"), "--nb", "3"])
        assert rc == 0
        assert "Ego-Right" in capsys.readouterr().out

    def test_empty_input_exits_2(self, tmp_path, capsys):
        path = tmp_path / "empty.csv"
        with open(path, "w", newline="") as fh:
            csv.writer(fh).writerow(["run_seed", "cycle", "pair", "source",
                                     "value"])
        rc = main(["stats", str(path)])
        assert rc == 2
