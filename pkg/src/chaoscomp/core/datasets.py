"""
Dataset sources: CSV files, named benchmark tables and generated toy data.
"""

import csv
from pathlib import Path
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sklearn.datasets import (
    fetch_openml,
    load_breast_cancer,
    load_iris,
    load_wine,
    make_blobs,
    make_circles,
    make_moons,
)

from chaoscomp.core.logger import logger
from chaoscomp.core.types import FloatArray
from chaoscomp.schemas.config import SyntheticSpec
from chaoscomp.schemas.dataset import Dataset

MIN_FEATURES: int = 2

# Two-input truth tables; row order is (0,0), (0,1), (1,0), (1,1)
GATE_INPUTS: List[List[float]] = [[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]]
GATE_OUTPUTS: Dict[str, List[int]] = {
    "xor": [0, 1, 1, 0],
    "nand": [1, 1, 1, 0],
    "nor": [1, 0, 0, 0],
}

BUILTIN_LOADERS: Dict[str, Callable] = {
    "iris": load_iris,
    "breast_cancer": load_breast_cancer,
    "wine": load_wine,
}

# Local name -> OpenML dataset name (version 1)
OPENML_DATASETS: Dict[str, str] = {
    "seeds": "seeds",
    "banknote": "banknote-authentication",
    "ionosphere": "ionosphere",
}


Record = Tuple[int, List[str]]


def _read_records(path: Path) -> Tuple[List[str], List[Record]]:
    """Header and (line number, cells) of every non-blank row."""
    if not path.exists():
        logger.error(f"Dataset file does not exist: {path}")
        raise FileNotFoundError(f"dataset file does not exist: {path}")

    with open(path, "r", encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if not header:
            raise ValueError("no data rows")
        header = [name.strip() for name in header]

        records: List[Record] = []
        for line, record in enumerate(reader, start=2):
            if not record or all(not cell.strip() for cell in record):
                continue
            if len(record) != len(header):
                raise ValueError(f"line {line}: expected {len(header)} cells, got {len(record)}")
            records.append((line, record))
    if not records:
        raise ValueError("no data rows")
    return header, records


def _feature_matrix(header: List[str], records: List[Record], feature_index: Sequence[int]) -> FloatArray:
    rows: List[List[float]] = []
    for line, record in records:
        values: List[float] = []
        for i in feature_index:
            try:
                values.append(float(record[i]))
            except ValueError:
                raise ValueError(
                    f"non-numeric value {record[i]!r} at line {line}, column '{header[i]}'"
                ) from None
        rows.append(values)
    return np.asarray(rows, dtype=np.float64)


def load_csv(
    path: Union[str, Path],
    label_col: Optional[str] = None,
    class_names: Optional[Sequence[str]] = None,
) -> Dataset:
    """
    Read a headed CSV file; the label column defaults to the last one.

    Labels become dense integers in order of first appearance, unless
    `class_names` is given, in which case they are looked up in it (an
    evaluation file must use the label coding of its model).
    """
    path = Path(path)
    header, records = _read_records(path)

    label_name = label_col if label_col is not None else header[-1]
    if label_name not in header:
        raise ValueError(f"label column '{label_name}' not found in {path}")
    label_index = header.index(label_name)
    feature_index = [i for i in range(len(header)) if i != label_index]
    if len(feature_index) < MIN_FEATURES:
        raise ValueError("at least two features required")

    vocabulary: Dict[str, int] = {name: i for i, name in enumerate(class_names or [])}
    fixed = class_names is not None
    labels: List[int] = []
    for line, record in records:
        label = record[label_index].strip()
        if not label:
            raise ValueError(f"line {line}: missing label")
        if label not in vocabulary:
            if fixed:
                raise ValueError(f"line {line}: unknown class '{label}'")
            vocabulary[label] = len(vocabulary)
        labels.append(vocabulary[label])

    ds = Dataset(
        X=_feature_matrix(header, records, feature_index),
        y=np.asarray(labels, dtype=np.int64),
        feature_names=[header[i] for i in feature_index],
        class_names=list(vocabulary),
    )
    logger.debug(f"Loaded {ds.n_rows} rows x {ds.n_features} features from {path}: {ds.class_counts()}")
    return ds


def load_features_csv(
    path: Union[str, Path],
    n_features: int,
    label_col: Optional[str] = None,
) -> FloatArray:
    """
    Feature matrix of a file to classify, with or without a label column.

    With `label_col` the file is read like a training file and the labels
    are dropped. Without it, a file of exactly `n_features` columns is all
    features and a file with one more column has its last column ignored.
    """
    path = Path(path)
    if label_col is not None:
        return load_csv(path, label_col).X

    header, records = _read_records(path)
    if len(header) not in (n_features, n_features + 1):
        raise ValueError(
            f"{path} has {len(header)} columns, expected {n_features} features with an optional label column"
        )
    X = _feature_matrix(header, records, range(n_features))
    logger.debug(f"Loaded {X.shape[0]} rows x {n_features} features to classify from {path}")
    return X


def write_csv(ds: Dataset, path: Union[str, Path], label_col: str = "label") -> Path:
    """Write features and class names; floats use repr so they read back exactly."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    feature_names = ds.feature_names or [f"x{i + 1}" for i in range(ds.n_features)]
    names = ds.resolved_class_names()
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow([*feature_names, label_col])
        for row, label in zip(ds.X, ds.y):
            writer.writerow([*(repr(float(v)) for v in row), names[int(label)]])
    logger.debug(f"Wrote {ds.n_rows} rows to {path}")
    return path


def generate_synthetic(spec: SyntheticSpec) -> Dataset:
    """
    Seeded two-class toy data.

    circles, moons and linear draw `samples` points per class; the logic
    gates are always their four truth-table rows.
    """
    if spec.kind in GATE_OUTPUTS:
        X = np.asarray(GATE_INPUTS, dtype=np.float64)
        y = np.asarray(GATE_OUTPUTS[spec.kind], dtype=np.int64)
    elif spec.kind == "circles":
        X, y = make_circles(
            n_samples=(spec.samples, spec.samples), noise=spec.noise, factor=0.5, random_state=spec.seed
        )
    elif spec.kind == "moons":
        X, y = make_moons(n_samples=(spec.samples, spec.samples), noise=spec.noise, random_state=spec.seed)
    elif spec.kind == "linear":
        X, y = make_blobs(
            n_samples=[spec.samples, spec.samples],
            centers=[[-2.0, -2.0], [2.0, 2.0]],
            cluster_std=10.0 * spec.noise,
            random_state=spec.seed,
        )
    else:
        raise ValueError(f"unknown synthetic dataset kind: {spec.kind}")

    logger.debug(f"Generated {spec.kind} dataset with {len(y)} rows (seed {spec.seed})")
    return Dataset(X=X, y=y, feature_names=["x1", "x2"], class_names=["0", "1"])


def _fetch_openml(name: str) -> Dataset:
    """Download (or read from the scikit-learn cache) a table hosted on OpenML."""
    bunch = fetch_openml(name=OPENML_DATASETS[name], version=1, as_frame=False, parser="liac-arff")
    class_names, y = np.unique(np.asarray(bunch.target).astype(str), return_inverse=True)
    return Dataset(
        X=np.asarray(bunch.data, dtype=np.float64),
        y=y,
        feature_names=[str(f) for f in bunch.feature_names],
        class_names=[str(c) for c in class_names],
    )


def load_builtin(name: str) -> Dataset:
    """
    A named benchmark table.

    iris, breast_cancer and wine ship with scikit-learn. seeds, banknote
    and ionosphere are fetched from OpenML on first use and cached by
    scikit-learn; their classes are ordered by label text.
    """
    if name in BUILTIN_LOADERS:
        bunch = BUILTIN_LOADERS[name]()
        ds = Dataset(
            X=bunch.data,
            y=bunch.target,
            feature_names=[str(f) for f in bunch.feature_names],
            class_names=[str(c) for c in bunch.target_names],
        )
    elif name in OPENML_DATASETS:
        logger.step(f"Fetching '{name}' from OpenML...")
        ds = _fetch_openml(name)
    else:
        known = sorted([*BUILTIN_LOADERS, *OPENML_DATASETS])
        raise ValueError(f"unknown dataset '{name}', choose from: {', '.join(known)}")
    logger.debug(f"Loaded built-in dataset '{name}': {ds.n_rows} rows x {ds.n_features} features")
    return ds
