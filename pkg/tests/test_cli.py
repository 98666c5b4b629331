import dataclasses
import json

import pytest

from mfclab import (
    ControllerConfig,
    FixedInfluence,
    config_from_dict,
    demo_config,
    read_log_csv,
    write_config,
)
from mfclab.cli import main
from mfclab.harness import CSV_HEADER


@pytest.fixture
def short_config(tmp_path):
    path = tmp_path / "config.json"
    write_config(dataclasses.replace(demo_config(), horizon=1.0), path)
    return path


class TestDemoPaper:
    def test_emits_parseable_config(self, capsys):
        assert main(["demo-paper"]) == 0
        payload = json.loads(capsys.readouterr().out)
        assert config_from_dict(payload) == demo_config()

    def test_writes_file(self, tmp_path):
        out = tmp_path / "demo.json"
        assert main(["demo-paper", "--out", str(out)]) == 0
        assert config_from_dict(json.loads(out.read_text())) == demo_config()


class TestRun:
    def test_run_writes_log(self, short_config, tmp_path, capsys):
        out = tmp_path / "log.csv"
        assert main(["run", str(short_config), "--out", str(out)]) == 0
        lines = out.read_text(encoding="utf-8").splitlines()
        assert lines[0] == CSV_HEADER
        assert len(lines) == 52
        assert "51 steps" in capsys.readouterr().out

    def test_seed_override_changes_noise(self, short_config, tmp_path):
        out1, out2 = tmp_path / "a.csv", tmp_path / "b.csv"
        assert main(["run", str(short_config), "--out", str(out1), "--seed", "3"]) == 0
        assert main(["run", str(short_config), "--out", str(out2), "--seed", "4"]) == 0
        assert out1.read_bytes() != out2.read_bytes()

    def test_no_noise_measurement_equals_truth(self, short_config, tmp_path):
        out = tmp_path / "log.csv"
        assert main(["run", str(short_config), "--out", str(out), "--no-noise"]) == 0
        log = read_log_csv(out)
        assert (log.y_meas == log.y_true).all()

    def test_oracle_flag_accepted(self, short_config, tmp_path):
        assert main(["run", str(short_config), "--oracle-f"]) == 0

    def test_missing_config_is_config_error(self, tmp_path, capsys):
        assert main(["run", str(tmp_path / "nope.json")]) == 1
        assert "error:" in capsys.readouterr().err

    def test_bad_config_is_config_error(self, tmp_path, capsys):
        path = tmp_path / "bad.json"
        path.write_text('{"horizon": 1.0}', encoding="utf-8")
        assert main(["run", str(path)]) == 1
        assert "error:" in capsys.readouterr().err

    def test_divergence_exit_code(self, tmp_path, capsys):
        cfg = dataclasses.replace(
            demo_config(),
            horizon=1.0,
            controller=ControllerConfig(
                margin=1.0,
                exponent=11.0 / 9.0,
                coefficients=(0.35,),
                influence_policy=FixedInfluence(1e-300),
            ),
        )
        path = tmp_path / "config.json"
        write_config(cfg, path)
        out = tmp_path / "log.csv"
        assert main(["run", str(path), "--out", str(out)]) == 2
        assert "diverged" in capsys.readouterr().err
        # the truncated log is still written
        assert out.exists()


class TestMetricsCommand:
    def test_prints_summary(self, short_config, tmp_path, capsys):
        out = tmp_path / "log.csv"
        main(["run", str(short_config), "--out", str(out)])
        capsys.readouterr()
        assert main(["metrics", str(out), "--cutoff", "0.5"]) == 0
        text = capsys.readouterr().out
        assert "max_abs_e:" in text
        assert "rms_u:" in text

    def test_cutoff_beyond_horizon_is_error(self, short_config, tmp_path, capsys):
        out = tmp_path / "log.csv"
        main(["run", str(short_config), "--out", str(out)])
        assert main(["metrics", str(out), "--cutoff", "5.0"]) == 1
        assert "error:" in capsys.readouterr().err
