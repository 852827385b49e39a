"""Unit tests for run configuration documents.

Tests for:
- Run config validation and command-line overrides
- Sweep expansion
- TOML loading
"""

import pytest

from app.cli.schemas import RunConfig, load_document, load_run_config, parse_run_config
from app.exceptions import ConfigError
from app.scenarios.schemas import ScenarioConfig

BASE = {"scenario": "minkowski_1n", "t1": 1.0, "dt": 0.1}


@pytest.mark.unit
class TestRunConfig:
    """Tests for RunConfig."""

    @staticmethod
    def test_defaults():
        cfg = parse_run_config(BASE)
        assert cfg.nu == 1
        assert cfg.formats == ["csv"]
        assert cfg.initial_covector is None
        assert cfg.scenario_name == "minkowski_1n"

    @staticmethod
    def test_overrides_skip_none():
        cfg = parse_run_config(BASE, {"dt": 0.05, "t1": None, "nu": 0, "formats": None})
        assert cfg.dt == 0.05
        assert cfg.t1 == 1.0
        assert cfg.nu == 0
        assert cfg.control_settings().nu == 0

    @staticmethod
    def test_dt_must_not_exceed_t1():
        with pytest.raises(ConfigError):
            parse_run_config(dict(BASE, dt=2.0))

    @staticmethod
    def test_error_paths():
        with pytest.raises(ConfigError) as exc_info:
            parse_run_config(dict(BASE, dt=-1.0, formats=["png"]))
        paths = {path for path, _ in exc_info.value.diagnostics}
        assert "dt" in paths
        assert "formats.0" in paths

    @staticmethod
    def test_inline_scenario():
        doc = dict(
            BASE,
            scenario={
                "name": "inline",
                "algebra": {"kind": "named", "name": "heisenberg"},
                "cone": {"kind": "lorentz", "index": [1, 2]},
                "antinorm": {"kind": "quadratic"},
            },
        )
        cfg = parse_run_config(doc)
        assert isinstance(cfg.scenario, ScenarioConfig)
        assert cfg.scenario_name == "inline"

    @staticmethod
    def test_scheduled_rule_needs_schedule():
        cfg = parse_run_config(dict(BASE, selection_rule="Scheduled"))
        with pytest.raises(ValueError):
            cfg.control_settings()


@pytest.mark.unit
class TestSweep:
    """Tests for sweep expansion."""

    @staticmethod
    def test_expand_names_and_overrides():
        cfg = RunConfig.model_validate(
            dict(
                BASE,
                output_path="line",
                sweep=[{"name": "slow", "dt": 0.5}, {"initial_covector": [-1.0, 1.0, 0.0]}],
            )
        )
        runs = cfg.expand()
        assert [r.output_path for r in runs] == ["line", "line-slow", "line-2"]
        assert runs[1].dt == 0.5
        assert runs[2].initial_covector == [-1.0, 1.0, 0.0]
        assert all(r.sweep == [] for r in runs)

    @staticmethod
    def test_sweep_entry_dt_checked():
        with pytest.raises(ConfigError):
            parse_run_config(dict(BASE, sweep=[{"t1": 0.05}]))


@pytest.mark.unit
class TestLoading:
    """Tests for TOML loading."""

    @staticmethod
    def test_load_run_config(tmp_path):
        path = tmp_path / "run.toml"
        path.write_text('scenario = "plane_hybrid"\nt1 = 2.0\ndt = 0.02\nformats = ["csv", "svg"]\n')
        cfg = load_run_config(path)
        assert cfg.scenario == "plane_hybrid"
        assert cfg.formats == ["csv", "svg"]

    @staticmethod
    def test_missing_file(tmp_path):
        with pytest.raises(ConfigError):
            load_document(tmp_path / "missing.toml")

    @staticmethod
    def test_invalid_toml(tmp_path):
        path = tmp_path / "bad.toml"
        path.write_text("scenario = \n")
        with pytest.raises(ConfigError) as exc_info:
            load_document(path)
        assert "invalid TOML" in exc_info.value.diagnostics[0][1]
