from pathlib import Path
from typing import List, Optional, Sequence, Tuple

import numpy as np

from chaoscomp.core.boundary import Bounds, BoundaryPoint, decision_boundary_grid
from chaoscomp.core.classifier import fit, predict_batch, predict_labels
from chaoscomp.core.coder import class_entropy_report
from chaoscomp.core.datasets import generate_synthetic, load_builtin, load_csv, load_features_csv
from chaoscomp.core.logger import logger
from chaoscomp.core.persistence import load_model, save_model
from chaoscomp.core.pipeline import (
    cap_per_class,
    compute_metrics,
    grid_search,
    train_test_split,
    write_cv_table,
)
from chaoscomp.schemas.config import RunConfig, TrainConfig
from chaoscomp.schemas.dataset import Dataset
from chaoscomp.schemas.model import ChaosCompModel, Metrics, Prediction, TrainReport, TuneReport


class Orchestrator:
    """
    Runs the train, tune, evaluate and predict flows for one configuration.

    Relative paths are resolved against the project root (the directory
    holding chaoscomp.yaml, or the working directory without one).
    """

    def __init__(self, config: RunConfig, project_root: Path):
        self.config = config
        self.project_root = project_root
        logger.debug(f"Orchestrator initialized in {project_root}")

    def resolve(self, path: str) -> Path:
        candidate = Path(path)
        return candidate if candidate.is_absolute() else self.project_root / candidate

    # Data

    def load_dataset(self, class_names: Optional[Sequence[str]] = None) -> Dataset:
        """
        Load the configured data source.

        With `class_names` the labels are recoded to that order, so a
        model sees the label coding it was trained with.
        """
        source = self.config.require_source()
        if source == "data":
            return load_csv(self.resolve(self.config.data), self.config.label_col, class_names)

        if source == "dataset":
            ds = load_builtin(self.config.dataset)
        else:
            ds = generate_synthetic(self.config.synthetic)
        return ds if class_names is None else _recode_labels(ds, class_names)

    def split(self, ds: Dataset) -> Tuple[Dataset, Optional[Dataset]]:
        """Train/test split followed by the optional per-class cap on the training part."""
        if self.config.test_fraction == 0.0:
            logger.info("Test fraction is 0: training on every row")
            train_ds, test_ds = ds, None
        else:
            train_ds, test_ds = train_test_split(ds, self.config.test_fraction, self.config.seed)
        if self.config.cap_per_class is not None:
            train_ds = cap_per_class(train_ds, self.config.cap_per_class)

        names = ds.resolved_class_names()
        train_counts = train_ds.class_counts()
        test_counts = test_ds.class_counts() if test_ds is not None else {}
        logger.print_table(
            "Split",
            ["class", "train", "test"],
            [[name, train_counts[name], test_counts.get(name, 0)] for name in names],
        )
        return train_ds, test_ds

    # Flows

    def train(self) -> Tuple[ChaosCompModel, TrainReport]:
        """Fit with the configured (threshold, n), save the model and score it."""
        cfg = self.config
        logger.step("Loading data...")
        train_ds, test_ds = self.split(self.load_dataset())

        logger.step(f"Training with n={cfg.n}, threshold={cfg.threshold}, alpha={cfg.alpha}...")
        model = self._fit(train_ds, cfg.train_config())
        report = TrainReport(
            train=self.score(model, train_ds),
            test=self.score(model, test_ds) if test_ds is not None else None,
            train_counts=train_ds.class_counts(),
            test_counts=test_ds.class_counts() if test_ds is not None else {},
        )

        path = save_model(model, self.resolve(cfg.model_out))
        logger.success(f"Model saved to {path}")
        return model, report

    def tune(self) -> Tuple[ChaosCompModel, TuneReport]:
        """Grid search on the training split, then refit the best cell on all of it."""
        cfg = self.config
        logger.step("Loading data...")
        train_ds, test_ds = self.split(self.load_dataset())

        cells = len(cfg.grid.thresholds) * len(cfg.grid.n_values)
        logger.step(f"Searching {cells} cells with {cfg.grid.folds}-fold cross-validation...")
        threshold, n, table = grid_search(
            train_ds,
            cfg.grid,
            cfg.seed,
            jobs=cfg.jobs,
            pad_symbol=cfg.pad_symbol,
            augment=cfg.augment,
        )
        table_path = write_cv_table(table, self.resolve(cfg.cv_table_out))
        logger.success(f"Cross-validation table written to {table_path}")

        best_mean = next(row.mean_macro_f1 for row in table if row.threshold == threshold and row.n == n)
        logger.info(f"Best cell: threshold={threshold}, n={n} (mean macro F1 {best_mean:.4f})")

        best = TrainConfig(n=n, threshold=threshold, alpha=cfg.grid.alpha, pad_symbol=cfg.pad_symbol)
        model = self._fit(train_ds, best)
        report = TuneReport(
            best_threshold=threshold,
            best_n=n,
            best_mean_macro_f1=best_mean,
            train=self.score(model, train_ds),
            test=self.score(model, test_ds) if test_ds is not None else None,
        )

        path = save_model(model, self.resolve(cfg.model_out))
        logger.success(f"Model saved to {path}")
        return model, report

    def evaluate(self, model_path: str) -> Metrics:
        """Score a saved model on every row of the configured data source."""
        model = load_model(self.resolve(model_path))
        ds = self.load_dataset(class_names=model.class_names)
        logger.step(f"Evaluating on {ds.n_rows} rows...")
        return self.score(model, ds)

    def predict(self, model_path: str) -> Tuple[ChaosCompModel, List[Prediction]]:
        """Classify the configured rows; a CSV file may omit the label column."""
        model = load_model(self.resolve(model_path))
        if self.config.require_source() == "data":
            X = load_features_csv(self.resolve(self.config.data), model.n_features, self.config.label_col)
        else:
            X = self.load_dataset().X
        logger.step(f"Predicting {X.shape[0]} rows...")
        return model, predict_batch(X, model)

    def boundary(
        self, model_path: str, bounds: Bounds, resolution: int
    ) -> Tuple[ChaosCompModel, List[BoundaryPoint]]:
        model = load_model(self.resolve(model_path))
        logger.step(f"Classifying a {resolution}x{resolution} lattice...")
        return model, decision_boundary_grid(model, bounds, resolution)

    def entropy(self, model_path: str) -> List[dict]:
        model = load_model(self.resolve(model_path))
        return class_entropy_report(model)

    # Helpers

    def _fit(self, ds: Dataset, config: TrainConfig) -> ChaosCompModel:
        return fit(
            ds.X,
            ds.y,
            config,
            class_names=ds.resolved_class_names(),
            feature_names=ds.feature_names,
            augment=self.config.augment,
        )

    @staticmethod
    def score(model: ChaosCompModel, ds: Dataset) -> Metrics:
        return compute_metrics(ds.y, predict_labels(ds.X, model), model.n_classes)


def _recode_labels(ds: Dataset, class_names: Sequence[str]) -> Dataset:
    order = {name: index for index, name in enumerate(class_names)}
    names = ds.resolved_class_names()
    missing = [name for name in names if name not in order]
    if missing:
        raise ValueError(f"classes unknown to the model: {', '.join(missing)}")
    mapping = np.asarray([order[name] for name in names], dtype=np.int64)
    return Dataset(X=ds.X, y=mapping[ds.y], feature_names=ds.feature_names, class_names=list(class_names))
