"""Tests for global settings and run-config layering."""

import math

import pytest

from config.settings import (
    DEFAULT_PHI1_LIST,
    Settings,
    build_sweep_config,
    load_config_file,
    load_settings,
    merge_layers,
)
from core.errors import InvalidConfigError


class TestLoadSettings:
    def test_defaults(self, monkeypatch) -> None:
        for var in ["SWEEP_WORKERS", "RUN_LOG_DIR", "DEFAULT_PHI0", "DEFAULT_SIGMA"]:
            monkeypatch.delenv(var, raising=False)

        settings = load_settings()
        assert settings.workers == 0
        assert settings.run_log_dir == "logs/runs"
        assert settings.default_phi0 == pytest.approx(math.pi / 4)
        assert settings.default_sigma == 1.0

    def test_from_env(self, monkeypatch) -> None:
        monkeypatch.setenv("SWEEP_WORKERS", "3")
        monkeypatch.setenv("DEFAULT_SIGMA", "2.5")

        settings = load_settings()
        assert settings.workers == 3
        assert settings.default_sigma == 2.5

    def test_bad_number(self, monkeypatch) -> None:
        monkeypatch.setenv("SWEEP_WORKERS", "many")
        with pytest.raises(InvalidConfigError):
            load_settings()

    def test_resolved_workers(self, monkeypatch) -> None:
        monkeypatch.setattr("config.settings.os.sched_getaffinity", lambda pid: set(range(6)), raising=False)
        monkeypatch.setattr("config.settings.os.cpu_count", lambda: 64)
        assert Settings(workers=0).resolved_workers() == 6
        assert Settings(workers=2).resolved_workers() == 2
        assert Settings(workers=2).resolved_workers(0) == 6
        assert Settings(workers=0).resolved_workers(4) == 4

    def test_resolved_workers_without_affinity(self, monkeypatch) -> None:
        monkeypatch.delattr("config.settings.os.sched_getaffinity", raising=False)
        monkeypatch.setattr("config.settings.os.cpu_count", lambda: 6)
        assert Settings(workers=0).resolved_workers() == 6
        monkeypatch.setattr("config.settings.os.cpu_count", lambda: None)
        assert Settings(workers=0).resolved_workers() == 1


class TestConfigFile:
    def test_reads_keys(self, tmp_path) -> None:
        path = tmp_path / "run.env"
        path.write_text("# comment\nQUANTITY=qfi11\nPHI1=0.1,2\n")
        assert load_config_file(path) == {"QUANTITY": "qfi11", "PHI1": "0.1,2"}

    def test_missing_file(self, tmp_path) -> None:
        with pytest.raises(InvalidConfigError):
            load_config_file(tmp_path / "absent.env")

    def test_unknown_key(self, tmp_path) -> None:
        path = tmp_path / "run.env"
        path.write_text("QUANTITY=qfi11\nPHASE=1\n")
        with pytest.raises(InvalidConfigError) as excinfo:
            load_config_file(path)
        assert "PHASE" in excinfo.value.message


class TestMergeLayers:
    def test_later_layers_win_and_none_is_skipped(self) -> None:
        merged = merge_layers({"SIGMA": "1", "SEED": "4"}, {"SIGMA": 2.0, "SEED": None})
        assert merged == {"SIGMA": 2.0, "SEED": "4"}

    def test_phase_spellings_replace_each_other(self) -> None:
        assert merge_layers({"PHI0": "0.3"}, {"PHI0_K": 2}) == {"PHI0_K": 2}
        assert merge_layers({"PHI0_K": "2"}, {"PHI0": 0.3}) == {"PHI0": 0.3}


class TestBuildSweepConfig:
    def test_defaults(self) -> None:
        config = build_sweep_config(Settings(), overrides={"QUANTITY": "upsilon"})
        assert config.eps_steps == 81
        assert config.phi1_list == DEFAULT_PHI1_LIST
        assert config.phi0 == pytest.approx(math.pi / 4)
        assert config.output_path == "output/upsilon.csv"
        assert config.mc is None
        assert config.strict is False

    def test_cli_overrides_file(self) -> None:
        file_values = {"QUANTITY": "qfi00", "PHI1": "0.1,0.5", "SIGMA": "1", "STRICT": "yes"}
        config = build_sweep_config(Settings(), file_values, {"SIGMA": 2.0, "PHI0_K": 2})
        assert config.quantity == "qfi00"
        assert config.phi1_list == (0.1, 0.5)
        assert config.sigma == 2.0
        assert config.phi0 == pytest.approx(math.pi / 2)
        assert config.strict is True

    def test_montecarlo_block(self) -> None:
        config = build_sweep_config(
            Settings(), {"QUANTITY": "montecarlo", "MC_SHOTS": "1e5", "MC_REPEATS": "50", "SEED": "9"}
        )
        assert config.mc.shots == 100_000
        assert config.mc.repeats == 50
        assert config.mc.seed == 9

    def test_large_seed_is_exact(self) -> None:
        seed = 2**63 - 1
        for raw in (seed, str(seed)):
            config = build_sweep_config(Settings(), {"QUANTITY": "montecarlo", "SEED": raw})
            assert config.mc.seed == seed
        neighbour = build_sweep_config(Settings(), {"QUANTITY": "montecarlo", "SEED": str(seed - 1)})
        assert neighbour.mc.seed == seed - 1

    def test_non_integral_seed(self) -> None:
        for raw in ("1.5", "inf", "nan"):
            with pytest.raises(InvalidConfigError):
                build_sweep_config(Settings(), {"QUANTITY": "montecarlo", "SEED": raw})

    def test_missing_quantity(self) -> None:
        with pytest.raises(InvalidConfigError):
            build_sweep_config(Settings(), {"PHI1": "1"})

    def test_unparseable_value(self) -> None:
        with pytest.raises(InvalidConfigError):
            build_sweep_config(Settings(), {"QUANTITY": "qfi00", "EPS_STEPS": "lots"})
        with pytest.raises(InvalidConfigError):
            build_sweep_config(Settings(), {"QUANTITY": "qfi00", "STRICT": "maybe"})
