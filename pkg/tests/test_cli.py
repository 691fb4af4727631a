import json
import math
import subprocess
import sys

import numpy as np
import pytest

from lmg_asymmetry import cli, validation
from lmg_asymmetry.cli import RunConfig, main, read_meta
from lmg_asymmetry.errors import ConfigError, InvariantError
from lmg_asymmetry.sweep import (
    PointError,
    PointTask,
    SweepTable,
    evaluate_point,
    format_float,
    grid_from_spec,
    parallel_map,
)

SMALL = ["--j2", "10", "--tmax", "5", "--samples", "51"]


def fail_at_half(task):
    if task.h == 0.5:
        raise ArithmeticError("synthetic failure")
    return {"order_parameter": task.h}


class TestFormatting:
    @pytest.mark.parametrize(
        "value,text",
        [(0.1, "0.1"), (1 / 3, "0.333333333333"), (-0.0, "0"), (True, "1"), (False, "0"),
         (7, "7"), (math.inf, "inf"), (-math.inf, "-inf"), (math.nan, "nan"), (1.23456789012345e-20, "1.23456789012e-20")],
    )
    def test_format_float(self, value, text):
        assert format_float(value) == text

    def test_grid_spec(self):
        np.testing.assert_allclose(grid_from_spec("0:1:5"), [0, 0.25, 0.5, 0.75, 1])
        np.testing.assert_allclose(grid_from_spec("0.3:0.3:1"), [0.3])
        for bad in ("0:1", "a:b:c", "0:1:0", "0:1:1"):
            with pytest.raises(ValueError):
                grid_from_spec(bad)

    def test_table_sorted_and_round_trips(self, tmp_path):
        t = SweepTable(["gamma", "h", "v"], [(0.5, 0.2, 1.0), (0.1, 0.9, 2.0), (0.1, 0.3, 3.0)])
        assert [r[:2] for r in t.rows] == [(0.1, 0.3), (0.1, 0.9), (0.5, 0.2)]
        path = tmp_path / "t.csv"
        t.write_csv(path)
        back = SweepTable.read_csv(path)
        assert back.schema == t.schema and back.rows == t.rows


class TestParallel:
    def test_order_preserved_across_workers(self):
        tasks = [PointTask(twice_j=6, gamma=0.3, h=h, t_max=5.0, n_samples=51) for h in (0.9, 0.1, 0.5)]
        serial = parallel_map(tasks, evaluate_point, workers=1)
        pooled = parallel_map(tasks, evaluate_point, workers=2)
        assert serial == pooled

    @pytest.mark.parametrize("workers", [1, 2])
    def test_point_error_names_coordinates(self, workers):
        tasks = [PointTask(twice_j=8, gamma=0.25, h=h) for h in (0.1, 0.5, 0.9)]
        with pytest.raises(PointError) as info:
            parallel_map(tasks, fail_at_half, workers=workers)
        msg = str(info.value)
        assert "gamma=0.25" in msg and "h=0.5" in msg and "j=4.0" in msg and "synthetic failure" in msg


class TestConfig:
    def test_json_round_trip(self):
        cfg = RunConfig(mode="sweep2d", twice_j=(30,), gamma=0.4, h_grid="0:1:11", generators=("x", "z"), beta=2.5)
        assert RunConfig.from_json(cfg.to_json()) == cfg
        default = RunConfig()
        assert math.isinf(RunConfig.from_json(default.to_json()).beta)
        assert RunConfig.from_json(default.to_json()) == default

    @pytest.mark.parametrize(
        "field,value",
        [("gamma", 1.5), ("J", 0.0), ("t_max", -1.0), ("n_samples", 1), ("ref", "thermal"),
         ("generators", ("w",)), ("h_grid", "0:1"), ("workers", 0), ("mode", "plot"), ("beta", 0.0)],
    )
    def test_invalid_fields_named(self, field, value):
        with pytest.raises(ConfigError, match=rf"^{field}:"):
            RunConfig(**{field: value})

    def test_unknown_field(self):
        with pytest.raises(ConfigError, match="bogus"):
            RunConfig.from_dict({"bogus": 1})

    def test_several_j_only_for_order_parameter(self):
        with pytest.raises(ConfigError, match="twice_j"):
            RunConfig(mode="trace", twice_j=(10, 20))
        RunConfig(mode="order_parameter", twice_j=(10, 20))


class TestMain:
    def test_trace_writes_data_and_meta(self, tmp_path):
        out = tmp_path / "run"
        assert main(["trace", *SMALL, "--h", "0.7", "--out", str(out)]) == 0
        table = SweepTable.read_csv(f"{out}.csv")
        assert table.schema[0] == "t" and len(table.rows) == 51
        meta = read_meta(f"{out}.meta")
        assert meta["config"]["h"] == 0.7
        assert meta["reference_kind"] == "initial"
        for key in ("code_version", "numpy_version", "wall_time_seconds", "timestamp"):
            assert key in meta

    def test_flags_override_config_file(self, tmp_path):
        conf = tmp_path / "c.json"
        conf.write_text(json.dumps({"gamma": 0.6, "h": 0.3, "t_max": 5, "n_samples": 51, "twice_j": [10]}))
        out = tmp_path / "run"
        assert main(["trace", "--config", str(conf), "--h", "0.9", "--out", str(out)]) == 0
        cfg = read_meta(f"{out}.meta")["config"]
        assert cfg["gamma"] == 0.6 and cfg["h"] == 0.9

    def test_config_error_exit_code(self, tmp_path, capsys):
        assert main(["trace", "--gamma", "2", "--out", str(tmp_path / "x")]) == 2
        assert "gamma" in capsys.readouterr().err

    def test_malformed_config_reports_line(self, tmp_path, capsys):
        conf = tmp_path / "c.json"
        conf.write_text('{\n  "gamma": 0.2,\n  "h": \n}\n')
        assert main(["trace", "--config", str(conf)]) == 2
        assert "line 4" in capsys.readouterr().err

    def test_invariant_exit_code(self, tmp_path, monkeypatch):
        def broken(*args, **kwargs):
            raise InvariantError("unitarity: synthetic")

        monkeypatch.setattr(cli, "evolve", broken)
        assert main(["trace", *SMALL, "--out", str(tmp_path / "x")]) == 3

    def test_failed_validation_exit_code(self, tmp_path, monkeypatch):
        monkeypatch.setattr(validation, "run_all", lambda seed: [validation.SuiteResult("fake", 2, 1, 1.0, 1e-10)])
        assert main(["validate", "--out", str(tmp_path / "v")]) == 3

    def test_sweep_deterministic_across_workers(self, tmp_path):
        args = ["sweep2d", *SMALL, "--h-grid", "0.05:0.95:21", "--gamma-grid", "0:1:21", "--generators", "z"]
        assert main([*args, "--workers", "1", "--out", str(tmp_path / "a")]) == 0
        assert main([*args, "--workers", "2", "--out", str(tmp_path / "b")]) == 0
        a, b = (tmp_path / "a.csv").read_bytes(), (tmp_path / "b.csv").read_bytes()
        assert a == b
        assert len(a.splitlines()) == 1 + 21 * 21

    def test_order_parameter_records_estimates(self, tmp_path):
        out = tmp_path / "op"
        assert main(["order-parameter", "--j2", "20,40", "--tmax", "20", "--samples", "201",
                     "--h-grid", "0.05:0.95:10", "--out", str(out)]) == 0
        meta = read_meta(f"{out}.meta")
        assert "critical_point.twice_j=40.threshold_crossing" in meta
        assert "critical_point.twice_j=20.max_neg_slope" in meta

    def test_validate_mode_passes(self, tmp_path, capsys):
        assert main(["validate", "--out", str(tmp_path / "v")]) == 0
        assert capsys.readouterr().out.count("PASS") == len(validation.SUITES)

    def test_module_entry_point(self, tmp_path):
        res = subprocess.run([sys.executable, "-m", "lmg_asymmetry", "trace", *SMALL, "--out", str(tmp_path / "m")],
                             capture_output=True, text=True)
        assert res.returncode == 0, res.stderr
