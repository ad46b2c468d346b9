"""
ChaosComp classifier.

Each class is an n-th return map whose cell widths are the smoothed word
probabilities of its training instances. A test instance goes to the
class that encodes its words in the fewest (ceiled) bits; equal sizes
are settled by cosine similarity between the instance's own smoothed
word distribution and each class distribution, then by class index.
"""

from typing import List, Optional, Sequence, Tuple

import numpy as np
import numpy.typing as npt

from chaoscomp.core.logger import logger
from chaoscomp.core.preprocessing import augment_sum_squares, minmax_apply, minmax_fit
from chaoscomp.core.symbolic import count_rows, extract_words, pad_bits, symbolize_rows, word_frequencies
from chaoscomp.core.types import FloatArray, IntArray
from chaoscomp.schemas.config import TrainConfig
from chaoscomp.schemas.model import ChaosCompModel, ClassDistribution, Prediction, ScalerParams


def _smooth(freq_sum: FloatArray, instances: int, n: int, alpha: float) -> FloatArray:
    """(sum_i p_i,w + alpha) / (N + 2^n alpha)"""
    return (freq_sum + alpha) / (instances + (1 << n) * alpha)


def fit_class_distribution(
    instances: Sequence[npt.ArrayLike],
    n: int,
    alpha: float,
    pad_symbol: int = 1,
    class_id: int = 0,
) -> ClassDistribution:
    """Average per-instance word frequencies of one class, Laplace smoothed."""
    if len(instances) == 0:
        raise ValueError("empty class")
    if alpha <= 0.0:
        raise ValueError(f"smoothing constant must be > 0, got {alpha!r}")

    freq_sum = np.zeros(1 << n, dtype=np.float64)
    for bits in instances:
        freq_sum += word_frequencies(extract_words(pad_bits(bits, n, pad_symbol), n))
    probs = _smooth(freq_sum, len(instances), n, alpha)
    return ClassDistribution(class_id=class_id, probs=tuple(float(p) for p in probs))


def _row_frequencies(X_scaled: FloatArray, config: TrainConfig) -> FloatArray:
    words = symbolize_rows(X_scaled, config.threshold, config.n, config.pad_symbol)
    return count_rows(words, config.n) / words.shape[1]


def train(
    X: npt.ArrayLike,
    y: npt.ArrayLike,
    config: TrainConfig,
    *,
    class_names: Optional[Sequence[str]] = None,
    scaler: Optional[ScalerParams] = None,
    augment: bool = False,
    feature_names: Optional[Sequence[str]] = None,
) -> ChaosCompModel:
    """
    Build one smoothed return map per class from a scaled matrix.

    `scaler` and `augment` describe how raw rows reach X; they are stored
    so the model can replay the same preprocessing at prediction time.
    """
    X = np.asarray(X, dtype=np.float64)
    labels = np.asarray(y, dtype=np.int64)
    if X.shape[0] != labels.shape[0]:
        raise ValueError(f"{X.shape[0]} rows but {labels.shape[0]} labels")
    n_classes = len(class_names) if class_names else (int(labels.max()) + 1 if labels.size else 0)
    names = list(class_names) if class_names else [str(c) for c in range(n_classes)]
    if n_classes == 0:
        raise ValueError("empty class")
    if labels.size and (labels.min() < 0 or labels.max() >= n_classes):
        raise ValueError("label outside the declared classes")

    freqs = _row_frequencies(X, config)
    classes: List[ClassDistribution] = []
    for class_id in range(n_classes):
        members = labels == class_id
        count = int(members.sum())
        if count == 0:
            logger.error(f"Class '{names[class_id]}' has no training instances")
            raise ValueError(f"empty class: {names[class_id]}")
        probs = _smooth(freqs[members].sum(axis=0), count, config.n, config.alpha)
        classes.append(ClassDistribution(class_id=class_id, probs=tuple(float(p) for p in probs)))

    if scaler is None:
        scaler = ScalerParams(data_min=(0.0,) * X.shape[1], data_max=(1.0,) * X.shape[1])

    model = ChaosCompModel(
        n=config.n,
        threshold=config.threshold,
        alpha=config.alpha,
        pad_symbol=config.pad_symbol,
        augment=augment,
        scaler=scaler,
        classes=classes,
        class_names=names,
        feature_names=list(feature_names or []),
    )
    logger.debug(
        f"Trained {n_classes} class maps (n={config.n}, threshold={config.threshold}) on {X.shape[0]} rows"
    )
    return model


def fit(
    X_raw: npt.ArrayLike,
    y: npt.ArrayLike,
    config: TrainConfig,
    *,
    class_names: Optional[Sequence[str]] = None,
    feature_names: Optional[Sequence[str]] = None,
    augment: bool = True,
) -> ChaosCompModel:
    """Augment, fit the scaler on these rows, scale, then train."""
    X_aug, augmented = augment_sum_squares(X_raw, enabled=augment)
    scaler = minmax_fit(X_aug)
    return train(
        minmax_apply(X_aug, scaler),
        y,
        config,
        class_names=class_names,
        scaler=scaler,
        augment=augmented,
        feature_names=feature_names,
    )


def cosine_similarity(u: npt.ArrayLike, v: npt.ArrayLike) -> float:
    a = np.asarray(u, dtype=np.float64).reshape(-1)
    b = np.asarray(v, dtype=np.float64).reshape(-1)
    if a.size != b.size:
        raise ValueError(f"vectors differ in length ({a.size} vs {b.size})")
    norm = float(np.linalg.norm(a) * np.linalg.norm(b))
    if norm == 0.0:
        raise ValueError("cosine similarity of a zero vector")
    return float(np.clip(a @ b / norm, -1.0, 1.0))


def prepare(X_raw: npt.ArrayLike, model: ChaosCompModel) -> FloatArray:
    """Replay the training preprocessing on raw rows."""
    X = np.asarray(X_raw, dtype=np.float64)
    if X.ndim == 1:
        X = X.reshape(1, -1)
    if X.shape[1] != model.n_features:
        raise ValueError(f"model expects {model.n_features} features, got {X.shape[1]}")
    if model.augment:
        X = np.hstack((X, np.sum(X * X, axis=1, keepdims=True)))
    return minmax_apply(X, model.scaler)


def _decide(
    X_scaled: FloatArray, model: ChaosCompModel
) -> Tuple[IntArray, FloatArray, IntArray, npt.NDArray[np.bool_], FloatArray]:
    """
    Vectorized decision rule.

    Returns labels, exact bits, ceiled bits, the tie mask and the cosine
    matrix (NaN on rows without a tie).
    """
    words = symbolize_rows(X_scaled, model.threshold, model.n, model.pad_symbol)
    counts = count_rows(words, model.n)
    exact = np.maximum(-(counts @ model.log2_probs.T), 0.0)
    ceiled = np.ceil(exact).astype(np.int64)

    attains_min = ceiled == ceiled.min(axis=1, keepdims=True)
    tied = attains_min.sum(axis=1) > 1
    labels = np.argmax(attains_min, axis=1).astype(np.int64)
    similarity = np.full(exact.shape, np.nan)

    if np.any(tied):
        # The instance's own distribution, smoothed with the training alpha
        own = _smooth(counts[tied] / words.shape[1], 1, model.n, model.alpha)
        class_probs = model.probs_matrix
        cos = (own @ class_probs.T) / np.outer(
            np.linalg.norm(own, axis=1), np.linalg.norm(class_probs, axis=1)
        )
        similarity[tied] = cos
        candidates = np.where(attains_min[tied], cos, -np.inf)
        # argmax returns the lowest class index among equal maxima
        labels[tied] = np.argmax(candidates, axis=1)
        logger.debug(f"{int(tied.sum())} size ties resolved by cosine similarity")

    return labels, exact, ceiled, tied, similarity


def predict_labels(X_raw: npt.ArrayLike, model: ChaosCompModel) -> IntArray:
    X = np.asarray(X_raw, dtype=np.float64)
    if X.size == 0:
        return np.empty(0, dtype=np.int64)
    return _decide(prepare(X, model), model)[0]


def predict_batch(X_raw: npt.ArrayLike, model: ChaosCompModel) -> List[Prediction]:
    X = np.asarray(X_raw, dtype=np.float64)
    if X.size == 0:
        return []
    labels, exact, ceiled, tied, similarity = _decide(prepare(X, model), model)
    return [
        Prediction(
            label=int(labels[i]),
            per_class_bits=tuple(int(b) for b in ceiled[i]),
            per_class_exact_bits=tuple(float(b) for b in exact[i]),
            tie_broken=bool(tied[i]),
            similarity=tuple(float(s) for s in similarity[i]) if tied[i] else None,
        )
        for i in range(labels.shape[0])
    ]


def predict_one(x: npt.ArrayLike, model: ChaosCompModel) -> Prediction:
    row = np.asarray(x, dtype=np.float64).reshape(1, -1)
    if row.shape[1] == 0:
        raise ValueError("empty instance")
    return predict_batch(row, model)[0]
