from typing import Tuple

import numpy as np
import numpy.typing as npt

from chaoscomp.core.logger import logger
from chaoscomp.core.types import FloatArray
from chaoscomp.schemas.model import ScalerParams

# Interval widths shrink geometrically with the feature count; above this
# the extra feature is not worth the lost precision.
AUGMENT_MAX_FEATURES: int = 30


def augment_sum_squares(X: npt.ArrayLike, enabled: bool = True) -> Tuple[FloatArray, bool]:
    """
    Append sum_j X[i, j]^2 as a last column when there are fewer than 30 features.

    Returns the matrix and whether the column was added.
    """
    X = np.asarray(X, dtype=np.float64)
    if not enabled or X.shape[1] >= AUGMENT_MAX_FEATURES:
        if enabled:
            logger.debug(f"{X.shape[1]} features: sum-of-squares augmentation skipped")
        return X, False
    return np.hstack((X, np.sum(X * X, axis=1, keepdims=True))), True


def minmax_fit(X_train: npt.ArrayLike) -> ScalerParams:
    X = np.asarray(X_train, dtype=np.float64)
    if X.ndim != 2 or X.shape[0] == 0:
        raise ValueError("cannot fit a scaler on an empty training set")
    return ScalerParams(
        data_min=tuple(float(v) for v in X.min(axis=0)),
        data_max=tuple(float(v) for v in X.max(axis=0)),
    )


def minmax_apply(X: npt.ArrayLike, params: ScalerParams) -> FloatArray:
    """Map every feature to [0, 1] with the training range; constant features become 0."""
    X = np.asarray(X, dtype=np.float64)
    if X.shape[1] != params.n_features:
        raise ValueError(f"scaler expects {params.n_features} features, got {X.shape[1]}")
    low = np.asarray(params.data_min)
    span = np.asarray(params.data_max) - low
    constant = span == 0.0
    scaled = (X - low) / np.where(constant, 1.0, span)
    scaled[:, constant] = 0.0
    return np.clip(scaled, 0.0, 1.0)
