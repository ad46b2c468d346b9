import numpy as np
import numpy.testing as npt
import pytest
from sklearn.utils import Bunch

from chaoscomp.core import datasets
from chaoscomp.core.datasets import (
    GATE_INPUTS,
    GATE_OUTPUTS,
    generate_synthetic,
    load_builtin,
    load_csv,
    load_features_csv,
    write_csv,
)
from chaoscomp.schemas.config import SyntheticSpec
from chaoscomp.schemas.dataset import Dataset


def _write(path, text):
    path.write_text(text, encoding="utf-8")
    return path


class TestLoadCsv:
    def test_labels_in_first_appearance_order(self, tmp_path):
        path = _write(tmp_path / "d.csv", "a,b,species\n1,2,virginica\n3,4,setosa\n5,6,virginica\n")
        ds = load_csv(path)
        assert ds.class_names == ["virginica", "setosa"]
        npt.assert_array_equal(ds.y, [0, 1, 0])
        npt.assert_array_equal(ds.X, [[1, 2], [3, 4], [5, 6]])
        assert ds.feature_names == ["a", "b"]

    def test_named_label_column(self, tmp_path):
        path = _write(tmp_path / "d.csv", "label,a,b\nx,1,2\ny,3,4\n")
        ds = load_csv(path, label_col="label")
        assert ds.feature_names == ["a", "b"]
        npt.assert_array_equal(ds.X, [[1, 2], [3, 4]])

    def test_fixed_class_names_recode(self, tmp_path):
        path = _write(tmp_path / "d.csv", "a,b,c\n1,2,y\n3,4,x\n")
        ds = load_csv(path, class_names=["x", "y"])
        npt.assert_array_equal(ds.y, [1, 0])
        assert ds.class_names == ["x", "y"]

    def test_unknown_class_with_fixed_names(self, tmp_path):
        path = _write(tmp_path / "d.csv", "a,b,c\n1,2,z\n")
        with pytest.raises(ValueError, match="line 2: unknown class 'z'"):
            load_csv(path, class_names=["x", "y"])

    def test_blank_lines_skipped(self, tmp_path):
        path = _write(tmp_path / "d.csv", "a,b,c\n1,2,x\n\n3,4,y\n")
        assert load_csv(path).n_rows == 2

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            load_csv(tmp_path / "absent.csv")

    @pytest.mark.parametrize(
        "text, message",
        [
            ("", "no data rows"),
            ("a,b,c\n", "no data rows"),
            ("a,c\n1,x\n", "at least two features required"),
            ("a,b,c\n1,2\n", "line 2: expected 3 cells, got 2"),
            ("a,b,c\n1,2,x\n3,4, \n", "line 3: missing label"),
            ("a,b,c\n1,oops,x\n", "non-numeric value 'oops' at line 2, column 'b'"),
        ],
    )
    def test_malformed(self, tmp_path, text, message):
        path = _write(tmp_path / "d.csv", text)
        with pytest.raises(ValueError, match=message):
            load_csv(path)

    def test_unknown_label_column(self, tmp_path):
        path = _write(tmp_path / "d.csv", "a,b,c\n1,2,x\n")
        with pytest.raises(ValueError, match="label column 'target' not found"):
            load_csv(path, label_col="target")


class TestWriteCsv:
    def test_written_file_reads_back_exactly(self, tmp_path):
        rng = np.random.default_rng(6)
        ds = Dataset(X=rng.normal(size=(12, 3)), y=rng.integers(0, 2, 12), class_names=["neg", "pos"])
        path = write_csv(ds, tmp_path / "out" / "d.csv")
        assert path.read_text(encoding="utf-8").splitlines()[0] == "x1,x2,x3,label"

        again = load_csv(path, class_names=["neg", "pos"])
        npt.assert_array_equal(again.X, ds.X)
        npt.assert_array_equal(again.y, ds.y)


class TestGenerateSynthetic:
    @pytest.mark.parametrize("gate", sorted(GATE_OUTPUTS))
    def test_gates_are_truth_tables(self, gate):
        ds = generate_synthetic(SyntheticSpec(kind=gate, samples=500))
        npt.assert_array_equal(ds.X, GATE_INPUTS)
        npt.assert_array_equal(ds.y, GATE_OUTPUTS[gate])
        assert ds.class_names == ["0", "1"]

    @pytest.mark.parametrize("kind", ["circles", "moons", "linear"])
    def test_balanced_and_seeded(self, kind):
        spec = SyntheticSpec(kind=kind, samples=40, noise=0.1, seed=90)
        ds = generate_synthetic(spec)
        assert ds.X.shape == (80, 2)
        assert ds.class_counts() == {"0": 40, "1": 40}
        npt.assert_array_equal(generate_synthetic(spec).X, ds.X)

    def test_seed_changes_draw(self):
        first = generate_synthetic(SyntheticSpec(kind="moons", samples=20, seed=1))
        second = generate_synthetic(SyntheticSpec(kind="moons", samples=20, seed=2))
        assert not np.array_equal(first.X, second.X)


class TestLoadBuiltin:
    @pytest.mark.parametrize(
        "name, shape, classes",
        [("iris", (150, 4), 3), ("breast_cancer", (569, 30), 2), ("wine", (178, 13), 3)],
    )
    def test_bundled_tables(self, name, shape, classes):
        ds = load_builtin(name)
        assert ds.X.shape == shape
        assert ds.n_classes == classes
        assert len(ds.feature_names) == shape[1]

    def test_unknown_name(self):
        with pytest.raises(ValueError, match="unknown dataset 'mnist'"):
            load_builtin("mnist")

    def test_openml_table_classes_ordered_by_label(self, monkeypatch):
        calls = []

        def fake_fetch(**kwargs):
            calls.append(kwargs)
            return Bunch(
                data=np.asarray([[1.0, 2.0], [3.0, 4.0], [5.0, 6.0]]),
                target=np.asarray(["g", "b", "g"], dtype=object),
                feature_names=["a01", "a02"],
            )

        monkeypatch.setattr(datasets, "fetch_openml", fake_fetch)
        ds = load_builtin("ionosphere")
        assert calls[0]["name"] == "ionosphere"
        assert calls[0]["version"] == 1
        assert ds.class_names == ["b", "g"]
        npt.assert_array_equal(ds.y, [1, 0, 1])
        assert ds.feature_names == ["a01", "a02"]

    def test_banknote_maps_to_its_openml_name(self, monkeypatch):
        names = []

        def fake_fetch(**kwargs):
            names.append(kwargs["name"])
            return Bunch(data=np.zeros((2, 4)), target=np.asarray(["1", "2"]), feature_names=["V1", "V2", "V3", "V4"])

        monkeypatch.setattr(datasets, "fetch_openml", fake_fetch)
        assert load_builtin("banknote").class_counts() == {"1": 1, "2": 1}
        assert names == ["banknote-authentication"]


class TestLoadFeaturesCsv:
    def test_features_only_file(self, tmp_path):
        path = _write(tmp_path / "d.csv", "a,b\n1,2\n3,4\n")
        npt.assert_array_equal(load_features_csv(path, 2), [[1, 2], [3, 4]])

    def test_trailing_label_column_ignored(self, tmp_path):
        path = _write(tmp_path / "d.csv", "a,b,label\n1,2,x\n3,4,\n")
        npt.assert_array_equal(load_features_csv(path, 2), [[1, 2], [3, 4]])

    def test_named_label_column(self, tmp_path):
        path = _write(tmp_path / "d.csv", "label,a,b\nx,1,2\n")
        npt.assert_array_equal(load_features_csv(path, 2, label_col="label"), [[1, 2]])

    def test_width_mismatch(self, tmp_path):
        path = _write(tmp_path / "d.csv", "a,b,c,d\n1,2,3,4\n")
        with pytest.raises(ValueError, match="has 4 columns, expected 2 features"):
            load_features_csv(path, 2)

    def test_non_numeric_feature(self, tmp_path):
        path = _write(tmp_path / "d.csv", "a,b\n1,oops\n")
        with pytest.raises(ValueError, match="non-numeric value 'oops' at line 2, column 'b'"):
            load_features_csv(path, 2)
