import json

import pytest
from typer.testing import CliRunner

from chaoscomp.cli import app, dispatch
from chaoscomp.core.persistence import save_model

runner = CliRunner()


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    return tmp_path


def _invoke(*args):
    result = runner.invoke(app, list(args))
    assert result.exit_code == 0, result.output
    return result


def _read_json(path):
    return json.loads(path.read_text(encoding="utf-8"))


def _train_xor(workdir):
    _invoke("synth", "--kind", "xor")
    _invoke(
        "train", "--data", "data/xor.csv", "--test-fraction", "0",
        "--n", "3", "--threshold", "0.3", "--out", "train.json",
    )
    return _read_json(workdir / "train.json")


def test_version():
    result = runner.invoke(app, ["--version"])
    assert result.exit_code == 0


def test_init(workdir):
    _invoke("init", "--directory", "project")
    assert (workdir / "project" / "chaoscomp.yaml").is_file()
    assert (workdir / "project" / "reports").is_dir()


def test_synth_writes_csv(workdir):
    _invoke("synth", "--kind", "moons", "--samples", "15", "--out", "moons.csv")
    lines = (workdir / "moons.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "x1,x2,label"
    assert len(lines) == 31


def test_train_then_evaluate_reproduces_training_metrics(workdir):
    report = _train_xor(workdir)
    assert report["test"] is None
    assert report["train"]["macro_f1"] == 1.0
    assert report["train_counts"] == {"0": 2, "1": 2}
    assert (workdir / "models" / "model.json").is_file()

    _invoke("evaluate", "--data", "data/xor.csv", "--out", "eval.json")
    assert _read_json(workdir / "eval.json") == report["train"]


def test_predict_rows(workdir):
    _train_xor(workdir)
    _invoke("predict", "--data", "data/xor.csv", "--out", "predictions.json")
    rows = _read_json(workdir / "predictions.json")
    assert [row["label"] for row in rows] == [0, 1, 1, 0]
    assert [row["class"] for row in rows] == ["0", "1", "1", "0"]
    for row in rows:
        assert row["bits"][row["label"]] == min(row["bits"])
        assert len(row["exact_bits"]) == 2


def test_predict_unlabeled_rows(workdir):
    _train_xor(workdir)
    (workdir / "features.csv").write_text("x1,x2\n0,0\n0,1\n1,0\n1,1\n", encoding="utf-8")
    _invoke("predict", "--data", "features.csv", "--out", "predictions.json")
    rows = _read_json(workdir / "predictions.json")
    assert [row["label"] for row in rows] == [0, 1, 1, 0]


def test_predict_rejects_wrong_width(workdir):
    _train_xor(workdir)
    (workdir / "wide.csv").write_text("x1,x2,x3,label\n0,0,0,0\n", encoding="utf-8")
    result = runner.invoke(app, ["predict", "--data", "wide.csv"])
    assert result.exit_code == 1


def test_boundary_lattice(workdir):
    _train_xor(workdir)
    _invoke("boundary", "--resolution", "5", "--out", "boundary.csv")
    lines = (workdir / "boundary.csv").read_text(encoding="utf-8").splitlines()
    assert lines[0] == "x,y,label,class"
    assert len(lines) == 26
    corners = {0: "0", 4: "1", 20: "1", 24: "0"}
    for index, label in corners.items():
        assert lines[1 + index].split(",")[2] == label


def test_boundary_needs_two_features(workdir, model_factory):
    save_model(model_factory([(0.25,) * 4, (0.25,) * 4]), workdir / "wide.json")
    result = runner.invoke(app, ["boundary", "--model", "wide.json"])
    assert result.exit_code == 1


def test_entropy_of_fair_map(workdir, model_factory):
    save_model(model_factory([(0.5, 0.5)], n=1, n_features=2), workdir / "fair.json")
    _invoke("entropy", "--model", "fair.json", "--out", "entropy.json")
    (row,) = _read_json(workdir / "entropy.json")
    assert row["entropy_bits_per_word"] == pytest.approx(1.0)
    assert row["baker_entropy"] == pytest.approx(1.0)


def test_tune_is_deterministic(workdir):
    _invoke("synth", "--kind", "moons", "--samples", "20", "--out", "moons.csv")
    for run in ("a", "b"):
        _invoke(
            "tune", "--data", "moons.csv",
            "--grid-n", "1", "--grid-n", "2",
            "--grid-threshold", "0.3", "--grid-threshold", "0.6",
            "--folds", "3",
            "--model", f"model_{run}.json", "--cv-table", f"cv_{run}.csv", "--out", f"tune_{run}.json",
        )
        _invoke("evaluate", "--data", "moons.csv", "--model", f"model_{run}.json", "--out", f"eval_{run}.json")
    for first, second in [
        ("cv_a.csv", "cv_b.csv"),
        ("model_a.json", "model_b.json"),
        ("tune_a.json", "tune_b.json"),
        ("eval_a.json", "eval_b.json"),
    ]:
        assert (workdir / first).read_bytes() == (workdir / second).read_bytes()
    report = _read_json(workdir / "tune_a.json")
    assert report["best_n"] in (1, 2)
    assert report["best_threshold"] in (0.3, 0.6)
    assert len((workdir / "cv_a.csv").read_text(encoding="utf-8").splitlines()) == 1 + 4 * 3


def test_train_caps_rows_per_class(workdir):
    _invoke(
        "train", "--kind", "moons", "--samples", "20", "--cap-per-class", "5",
        "--n", "2", "--threshold", "0.5", "--out", "train.json",
    )
    report = _read_json(workdir / "train.json")
    assert report["train_counts"] == {"0": 5, "1": 5}
    assert sum(report["test_counts"].values()) == 8


def test_configuration_file_supplies_the_source(workdir):
    _invoke("synth", "--kind", "nand", "--out", "data/nand.csv")
    (workdir / "chaoscomp.yaml").write_text(
        "data: data/nand.csv\ntest_fraction: 0.0\nn: 3\nthreshold: 0.3\n", encoding="utf-8"
    )
    _invoke("train", "--out", "train.json")
    assert _read_json(workdir / "train.json")["train"]["accuracy"] == 1.0


def test_missing_source_is_an_error(workdir):
    result = runner.invoke(app, ["train"])
    assert result.exit_code == 1


class TestDispatch:
    def test_unknown_command(self):
        assert dispatch(["compress"]) == 2

    def test_unknown_option(self):
        assert dispatch(["train", "--bogus"]) == 2

    @pytest.mark.parametrize(
        "argv",
        [
            ["train", "--kind", "xor", "--test-fraction", "1"],
            ["train", "--kind", "xor", "--threshold", "0"],
            ["tune", "--kind", "xor", "--alpha", "0"],
            ["shannon", "--p0", "1"],
        ],
    )
    def test_open_range_bounds(self, argv):
        assert dispatch(argv) == 2

    def test_interior_value_accepted(self, workdir):
        assert dispatch(["shannon", "--p0", "0.5", "--length", "100", "--trials", "1", "--out", "s.json"]) == 0

    def test_missing_model_file(self, workdir):
        _invoke("synth", "--kind", "xor")
        assert dispatch(["evaluate", "--data", "data/xor.csv", "--model", "absent.json"]) == 1

    def test_success(self, workdir):
        assert dispatch(["synth", "--kind", "nor", "--out", "nor.csv"]) == 0
        assert (workdir / "nor.csv").is_file()
