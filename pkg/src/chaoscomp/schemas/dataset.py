from typing import Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class Dataset(BaseModel):
    """
    Feature matrix with dense integer labels.

    Labels index into `class_names`; rows of `X` align with `y`.
    """
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    X: np.ndarray
    y: np.ndarray
    feature_names: List[str] = Field(default_factory=list)
    class_names: List[str] = Field(default_factory=list)

    @field_validator("X", mode="before")
    @classmethod
    def _as_matrix(cls, value: object) -> np.ndarray:
        X = np.array(value, dtype=np.float64)
        if X.ndim == 1:
            X = X.reshape(-1, 1) if X.size else X.reshape(0, 0)
        if X.ndim != 2:
            raise ValueError("feature matrix must be two dimensional")
        X.setflags(write=False)
        return X

    @field_validator("y", mode="before")
    @classmethod
    def _as_labels(cls, value: object) -> np.ndarray:
        y = np.array(value, dtype=np.int64).reshape(-1)
        y.setflags(write=False)
        return y

    @model_validator(mode="after")
    def _consistent(self) -> "Dataset":
        if self.X.shape[0] != self.y.shape[0]:
            raise ValueError(f"{self.X.shape[0]} feature rows but {self.y.shape[0]} labels")
        if self.y.size and self.y.min() < 0:
            raise ValueError("labels must be non-negative class indices")
        if self.class_names and self.y.size and self.y.max() >= len(self.class_names):
            raise ValueError("label outside the declared classes")
        if self.feature_names and len(self.feature_names) != self.n_features:
            raise ValueError("one feature name is required per column")
        return self

    @property
    def n_rows(self) -> int:
        return int(self.X.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.X.shape[1]) if self.X.ndim == 2 else 0

    @property
    def n_classes(self) -> int:
        if self.class_names:
            return len(self.class_names)
        return int(self.y.max()) + 1 if self.y.size else 0

    def resolved_class_names(self) -> List[str]:
        return self.class_names or [str(label) for label in range(self.n_classes)]

    def subset(self, rows: np.ndarray) -> "Dataset":
        """Rows in the given order; names are kept."""
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(
            X=self.X[rows],
            y=self.y[rows],
            feature_names=self.feature_names,
            class_names=self.resolved_class_names(),
        )

    def class_counts(self) -> Dict[str, int]:
        counts = np.bincount(self.y, minlength=self.n_classes)
        return {name: int(count) for name, count in zip(self.resolved_class_names(), counts)}
