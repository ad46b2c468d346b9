import os

import pytest
from pydantic import ValidationError

from chaoscomp.core.config import config_manager, find_config_file, generate_default_config, load_config
from chaoscomp.core.initializer import initialize
from chaoscomp.schemas.config import HyperGrid, RunConfig, default_thresholds


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestDefaults:
    def test_grid_defaults(self):
        grid = HyperGrid()
        assert grid.thresholds == default_thresholds()
        assert len(grid.thresholds) == 100
        assert grid.thresholds[0] == 0.01 and grid.thresholds[-1] == 1.0
        assert grid.n_values == [1, 2, 3, 4]
        assert (grid.alpha, grid.folds) == (0.01, 5)

    def test_generated_file_round_trips(self, tmp_path):
        path = generate_default_config(tmp_path / "chaoscomp.yaml")
        text = path.read_text(encoding="utf-8")
        assert "ChaosComp Configuration" in text
        assert "Laplace smoothing constant" in text
        assert load_config(path).model_dump() == RunConfig().model_dump()

    @pytest.mark.parametrize(
        "values",
        [
            {"test_fraction": 1.0},
            {"threshold": 0.0},
            {"alpha": 0.0},
            {"pad_symbol": 2},
            {"grid": {"thresholds": [1.5]}},
            {"grid": {"n_values": []}},
            {"dataset": "iris", "data": "x.csv"},
            {"model_out": "same.json", "cv_table_out": "same.json"},
            {"unknown_key": 1},
        ],
    )
    def test_invalid_values(self, values):
        with pytest.raises(ValidationError):
            RunConfig(**values)

    def test_zero_test_fraction_allowed(self):
        assert RunConfig(test_fraction=0.0).test_fraction == 0.0

    def test_require_source(self):
        with pytest.raises(ValueError, match="no data source configured"):
            RunConfig().require_source()
        assert RunConfig(dataset="wine").require_source() == "dataset"


class TestPrecedence:
    def test_environment_variables(self, monkeypatch):
        monkeypatch.setenv("CHAOSCOMP_N", "3")
        monkeypatch.setenv("CHAOSCOMP_GRID__FOLDS", "4")
        config = load_config()
        assert config.n == 3
        assert config.grid.folds == 4

    def test_file_outranks_environment(self, tmp_path, monkeypatch):
        monkeypatch.setenv("CHAOSCOMP_N", "3")
        path = _write(tmp_path / "chaoscomp.yaml", "n: 5\n")
        assert load_config(path).n == 5

    def test_overrides_outrank_file(self, tmp_path):
        path = _write(tmp_path / "chaoscomp.yaml", "n: 5\nthreshold: 0.4\n")
        config = load_config(path, {"n": 2, "threshold": None})
        assert (config.n, config.threshold) == (2, 0.4)

    def test_source_flag_replaces_file_source(self, tmp_path):
        path = _write(tmp_path / "chaoscomp.yaml", "dataset: iris\n")
        config = load_config(path, {"data": "rows.csv", "dataset": None})
        assert config.sources() == ["data"]

    def test_synthetic_section(self, tmp_path):
        path = _write(tmp_path / "chaoscomp.yaml", "synthetic:\n  kind: moons\n  samples: 30\n")
        config = load_config(path)
        assert config.require_source() == "synthetic"
        assert (config.synthetic.kind, config.synthetic.samples, config.synthetic.seed) == ("moons", 30, 90)


class TestReadDocument:
    def test_empty_file(self, tmp_path):
        path = _write(tmp_path / "chaoscomp.yaml", "")
        assert config_manager.read_document(path) == {}
        assert load_config(path).model_dump() == RunConfig().model_dump()

    def test_not_a_mapping(self, tmp_path):
        path = _write(tmp_path / "chaoscomp.yaml", "- 1\n- 2\n")
        with pytest.raises(ValueError, match="valid YAML dictionary"):
            config_manager.read_document(path)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_config(tmp_path / "absent.yaml")


class TestFindConfigFile:
    def test_walks_upwards(self, tmp_path):
        path = _write(tmp_path / "chaoscomp.yaml", "n: 2\n")
        nested = tmp_path / "a" / "b"
        nested.mkdir(parents=True)
        assert find_config_file(nested) == path.resolve()


class TestInitialize:
    def test_creates_workspace(self, tmp_path):
        target = tmp_path / "workspace"
        initialize(str(target))
        for name in ("data", "models", "reports"):
            assert (target / name).is_dir()
        assert load_config(target / "chaoscomp.yaml").n == 4

    def test_existing_configuration_is_kept(self, tmp_path):
        path = _write(tmp_path / "chaoscomp.yaml", "n: 7\n")
        initialize(str(tmp_path))
        assert path.read_text(encoding="utf-8") == "n: 7\n"
        assert os.path.isdir(tmp_path / "models")
