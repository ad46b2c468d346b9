"""
Splitting, cross-validated hyperparameter search and evaluation metrics.
"""

import csv
from pathlib import Path
from typing import List, NamedTuple, Tuple, Union

import numpy as np
import numpy.typing as npt
from joblib import Parallel, delayed
from sklearn.metrics import confusion_matrix, precision_recall_fscore_support
from sklearn.model_selection import StratifiedKFold
from sklearn.model_selection import train_test_split as _sk_train_test_split

from chaoscomp.core.classifier import predict_labels, train
from chaoscomp.core.logger import logger
from chaoscomp.core.preprocessing import augment_sum_squares, minmax_apply, minmax_fit
from chaoscomp.core.types import FloatArray, IntArray
from chaoscomp.schemas.config import HyperGrid, TrainConfig
from chaoscomp.schemas.dataset import Dataset
from chaoscomp.schemas.model import CvRecord, Metrics, ScalerParams

CV_TABLE_COLUMNS: Tuple[str, ...] = ("threshold", "n", "fold", "macro_f1", "mean_macro_f1")


class _FoldData(NamedTuple):
    """Fold preprocessed once; every grid cell reuses it."""
    X_train: FloatArray
    y_train: IntArray
    X_val_raw: FloatArray
    y_val: IntArray
    scaler: ScalerParams
    augmented: bool


def _require_two_per_class(ds: Dataset) -> None:
    for name, count in ds.class_counts().items():
        if count < 2:
            logger.error(f"Class '{name}' has {count} instance(s); splitting needs at least 2")
            raise ValueError(f"class '{name}' has fewer than 2 instances")


def train_test_split(ds: Dataset, test_fraction: float, seed: int) -> Tuple[Dataset, Dataset]:
    """
    Seeded shuffle, then split. The test side gets ceil(test_fraction * rows) rows.

    Both parts keep the shuffled order.
    """
    if not (0.0 < test_fraction < 1.0):
        raise ValueError(f"test fraction must lie in (0, 1), got {test_fraction!r}")
    _require_two_per_class(ds)

    train_idx, test_idx = _sk_train_test_split(
        np.arange(ds.n_rows), test_size=test_fraction, random_state=seed, shuffle=True
    )
    train_ds, test_ds = ds.subset(train_idx), ds.subset(test_idx)
    logger.debug(f"Split {ds.n_rows} rows: train {train_ds.class_counts()}, test {test_ds.class_counts()}")
    return train_ds, test_ds


def cap_per_class(ds: Dataset, cap: int) -> Dataset:
    """Keep the first `cap` rows of each class, preserving row order."""
    if cap < 1:
        raise ValueError(f"per-class cap must be >= 1, got {cap}")
    keep = np.zeros(ds.n_rows, dtype=bool)
    for label in range(ds.n_classes):
        keep[np.flatnonzero(ds.y == label)[:cap]] = True
    capped = ds.subset(np.flatnonzero(keep))
    logger.debug(f"Capped training rows at {cap} per class: {capped.class_counts()}")
    return capped


def stratified_kfold(ds: Dataset, folds: int, seed: int) -> List[Tuple[IntArray, IntArray]]:
    """(train_idx, val_idx) pairs whose validation parts partition all rows."""
    for name, count in ds.class_counts().items():
        if count < folds:
            logger.error(f"Class '{name}' has {count} instances, fewer than {folds} folds")
            raise ValueError(f"class '{name}' is smaller than the number of folds ({count} < {folds})")

    splitter = StratifiedKFold(n_splits=folds, shuffle=True, random_state=seed)
    return [
        (train_idx.astype(np.int64), val_idx.astype(np.int64))
        for train_idx, val_idx in splitter.split(ds.X, ds.y)
    ]


def compute_metrics(y_true: npt.ArrayLike, y_pred: npt.ArrayLike, m: int) -> Metrics:
    """
    Accuracy and macro scores over the m classes.

    Macro F1 is the mean of per-class F1, not the harmonic mean of macro
    precision and recall. Classes never predicted score precision 0.
    """
    truth = np.asarray(y_true, dtype=np.int64).reshape(-1)
    pred = np.asarray(y_pred, dtype=np.int64).reshape(-1)
    if truth.shape != pred.shape:
        raise ValueError(f"{truth.size} true labels but {pred.size} predictions")
    if truth.size == 0:
        raise ValueError("no predictions to score")
    for labels in (truth, pred):
        if labels.min() < 0 or labels.max() >= m:
            raise ValueError(f"label outside [0, {m})")

    classes = list(range(m))
    precision, recall, f1, _ = precision_recall_fscore_support(
        truth, pred, labels=classes, average=None, zero_division=0
    )
    confusion = confusion_matrix(truth, pred, labels=classes)
    return Metrics(
        accuracy=float(np.trace(confusion) / truth.size),
        macro_precision=float(np.mean(precision)),
        macro_recall=float(np.mean(recall)),
        macro_f1=float(np.mean(f1)),
        confusion=confusion.astype(int).tolist(),
    )


def _prepare_fold(ds: Dataset, train_idx: IntArray, val_idx: IntArray, augment: bool) -> _FoldData:
    # Augmentation and scaling are refit on the fold's training rows only
    X_aug, augmented = augment_sum_squares(ds.X[train_idx], enabled=augment)
    scaler = minmax_fit(X_aug)
    return _FoldData(
        X_train=minmax_apply(X_aug, scaler),
        y_train=ds.y[train_idx],
        X_val_raw=ds.X[val_idx],
        y_val=ds.y[val_idx],
        scaler=scaler,
        augmented=augmented,
    )


def _score_cell(
    threshold: float,
    n: int,
    folds: List[_FoldData],
    alpha: float,
    pad_symbol: int,
    class_names: List[str],
) -> List[float]:
    config = TrainConfig(n=n, threshold=threshold, alpha=alpha, pad_symbol=pad_symbol)
    scores: List[float] = []
    for index, fold in enumerate(folds):
        try:
            model = train(
                fold.X_train,
                fold.y_train,
                config,
                class_names=class_names,
                scaler=fold.scaler,
                augment=fold.augmented,
            )
            predicted = predict_labels(fold.X_val_raw, model)
            scores.append(compute_metrics(fold.y_val, predicted, len(class_names)).macro_f1)
        except ValueError as e:
            logger.debug(f"Cell (threshold={threshold}, n={n}) fold {index} failed: {e}")
            scores.append(0.0)
    return scores


def grid_search(
    ds_train: Dataset,
    grid: HyperGrid,
    seed: int,
    jobs: int = 1,
    pad_symbol: int = 1,
    augment: bool = True,
) -> Tuple[float, int, List[CvRecord]]:
    """
    Mean validation macro F1 of every (threshold, n) cell.

    The best cell has the highest mean; ties go to the smaller n, then the
    smaller threshold. Results are merged in grid order whatever `jobs` is.
    """
    class_names = ds_train.resolved_class_names()
    folds = [
        _prepare_fold(ds_train, train_idx, val_idx, augment)
        for train_idx, val_idx in stratified_kfold(ds_train, grid.folds, seed)
    ]
    cells = [(threshold, n) for n in grid.n_values for threshold in grid.thresholds]
    logger.debug(f"Grid search over {len(cells)} cells x {grid.folds} folds with {jobs} job(s)")

    results = Parallel(n_jobs=jobs)(
        delayed(_score_cell)(threshold, n, folds, grid.alpha, pad_symbol, class_names)
        for threshold, n in cells
    )

    table: List[CvRecord] = []
    best: Tuple[float, int, float] = (-1.0, 0, 0.0)
    for (threshold, n), scores in zip(cells, results):
        mean = float(np.mean(scores))
        table.extend(
            CvRecord(threshold=threshold, n=n, fold=fold, macro_f1=score, mean_macro_f1=mean)
            for fold, score in enumerate(scores)
        )
        best_mean, best_n, best_threshold = best
        if mean > best_mean or (mean == best_mean and (n, threshold) < (best_n, best_threshold)):
            best = (mean, n, threshold)

    best_mean, best_n, best_threshold = best
    logger.debug(f"Best cell: threshold={best_threshold}, n={best_n}, mean macro F1={best_mean:.4f}")
    return best_threshold, best_n, table


def write_cv_table(rows: List[CvRecord], path: Union[str, Path]) -> Path:
    """CSV with one line per (cell, fold); floats written with repr so reruns are byte-identical."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(CV_TABLE_COLUMNS)
        for row in rows:
            writer.writerow([repr(row.threshold), row.n, row.fold, repr(row.macro_f1), repr(row.mean_macro_f1)])
    logger.debug(f"Wrote {len(rows)} cross-validation rows to {path}")
    return path
