import math
from fractions import Fraction
from functools import cached_property
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from chaoscomp.core.types import FloatArray

MODEL_DOCUMENT_VERSION: int = 1

# Probability vectors must sum to one within this tolerance
PROBABILITY_TOLERANCE: float = 1e-12


def _check_distribution(probs: Tuple[float, ...]) -> Tuple[float, ...]:
    size = len(probs)
    if size < 2 or size & (size - 1):
        raise ValueError(f"probability vector length must be a power of two >= 2, got {size}")
    if min(probs) <= 0.0:
        raise ValueError("all word probabilities must be strictly positive")
    if abs(math.fsum(probs) - 1.0) > PROBABILITY_TOLERANCE:
        raise ValueError(f"word probabilities must sum to 1, got {math.fsum(probs)!r}")
    return probs


class BakerParams(BaseModel):
    """Skewness of the first-return Baker's map; doubles as the symbol threshold."""
    model_config = ConfigDict(frozen=True)

    a: float = Field(gt=0.0, lt=1.0, description="Branch boundary of the map, strictly inside (0, 1)")


class WordSequence(BaseModel):
    """Non-overlapping n-bit words, each read most significant bit first."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    n: int = Field(ge=1)
    words: np.ndarray

    @field_validator("words", mode="before")
    @classmethod
    def _as_word_array(cls, value: object) -> np.ndarray:
        words = np.array(value, dtype=np.int64).reshape(-1)
        words.setflags(write=False)
        return words

    @model_validator(mode="after")
    def _check_range(self) -> "WordSequence":
        if self.words.size and (self.words.min() < 0 or self.words.max() >= (1 << self.n)):
            raise ValueError("word out of range")
        return self

    def __len__(self) -> int:
        return int(self.words.size)


class ReturnMapModel(BaseModel):
    """
    Piecewise-linear n-th return map.

    Word w owns the cell [cum[w], cum[w+1]) of width probs[w]; the map
    stretches every cell linearly onto [0, 1).
    """
    model_config = ConfigDict(frozen=True)

    probs: Tuple[float, ...]

    @field_validator("probs")
    @classmethod
    def _valid_probs(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        return _check_distribution(value)

    @property
    def n(self) -> int:
        return len(self.probs).bit_length() - 1

    @cached_property
    def probs_array(self) -> FloatArray:
        probs = np.asarray(self.probs, dtype=np.float64)
        probs.setflags(write=False)
        return probs

    @cached_property
    def cum(self) -> FloatArray:
        cum = np.concatenate(([0.0], np.cumsum(self.probs_array)))
        cum[-1] = 1.0
        cum.setflags(write=False)
        return cum

    @cached_property
    def exact_cum(self) -> Tuple[Fraction, ...]:
        """Cell boundaries as exact rationals; the last one is exactly 1."""
        return tuple(Fraction(float(c)) for c in self.cum)

    @classmethod
    def fair(cls, n: int) -> "ReturnMapModel":
        size = 1 << n
        return cls(probs=tuple([1.0 / size] * size))


class UnitInterval(BaseModel):
    """Half-open subinterval [lower, upper) of [0, 1), held exactly."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    lower: Fraction
    upper: Fraction

    @model_validator(mode="after")
    def _ordered(self) -> "UnitInterval":
        if not (0 <= self.lower < self.upper <= 1):
            raise ValueError(f"invalid interval [{float(self.lower)}, {float(self.upper)})")
        return self

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def midpoint(self) -> float:
        return float((self.lower + self.upper) / 2)

    def contains(self, x: float) -> bool:
        return self.lower <= Fraction(x) < self.upper


class CodeLength(BaseModel):
    """Description length of a sequence: exact -log2 of its interval and the ceiled bit count."""
    model_config = ConfigDict(frozen=True)

    exact_bits: float = Field(ge=0.0)
    ceil_bits: int = Field(ge=0)

    @model_validator(mode="after")
    def _consistent(self) -> "CodeLength":
        if self.ceil_bits != math.ceil(self.exact_bits):
            raise ValueError("ceil_bits must be the ceiling of exact_bits")
        return self

    @classmethod
    def from_exact(cls, exact_bits: float) -> "CodeLength":
        exact_bits = max(0.0, float(exact_bits))
        return cls(exact_bits=exact_bits, ceil_bits=math.ceil(exact_bits))


class ClassDistribution(BaseModel):
    """Smoothed word distribution of one class."""
    model_config = ConfigDict(frozen=True)

    class_id: int = Field(ge=0)
    probs: Tuple[float, ...]

    @field_validator("probs")
    @classmethod
    def _valid_probs(cls, value: Tuple[float, ...]) -> Tuple[float, ...]:
        return _check_distribution(value)

    @cached_property
    def return_map(self) -> ReturnMapModel:
        return ReturnMapModel(probs=self.probs)


class ScalerParams(BaseModel):
    """Per-feature minimum and maximum learned from training rows."""
    model_config = ConfigDict(frozen=True)

    data_min: Tuple[float, ...]
    data_max: Tuple[float, ...]

    @model_validator(mode="after")
    def _consistent(self) -> "ScalerParams":
        if len(self.data_min) != len(self.data_max):
            raise ValueError("scaler min and max must cover the same features")
        if any(hi < lo for lo, hi in zip(self.data_min, self.data_max)):
            raise ValueError("scaler max must be >= min for every feature")
        return self

    @property
    def n_features(self) -> int:
        return len(self.data_min)


class ChaosCompModel(BaseModel):
    """Trained classifier; also the persisted JSON document."""
    model_config = ConfigDict(frozen=True)

    version: Literal[1] = MODEL_DOCUMENT_VERSION
    n: int = Field(ge=1, description="Word length of every class map")
    threshold: float = Field(gt=0.0, le=1.0, description="Binarization threshold")
    alpha: float = Field(gt=0.0, description="Laplace smoothing constant")
    pad_symbol: Literal[0, 1] = 1
    augment: bool = Field(description="Whether the sum-of-squares feature is appended")
    scaler: ScalerParams
    classes: List[ClassDistribution] = Field(min_length=1)
    class_names: List[str]
    feature_names: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _consistent(self) -> "ChaosCompModel":
        if len(self.class_names) != len(self.classes):
            raise ValueError("one class name is required per class distribution")
        for index, dist in enumerate(self.classes):
            if dist.class_id != index:
                raise ValueError("class distributions must be ordered by class id")
            if len(dist.probs) != 1 << self.n:
                raise ValueError(f"class {index} distribution does not have 2^{self.n} entries")
        if self.n_features < 1:
            raise ValueError("scaler does not cover the raw features")
        return self

    @property
    def n_classes(self) -> int:
        return len(self.classes)

    @property
    def n_features(self) -> int:
        """Raw feature count, before augmentation."""
        return self.scaler.n_features - int(self.augment)

    @cached_property
    def probs_matrix(self) -> FloatArray:
        """(m, 2^n) matrix of word probabilities, one row per class."""
        table = np.array([dist.probs for dist in self.classes], dtype=np.float64)
        table.setflags(write=False)
        return table

    @cached_property
    def log2_probs(self) -> FloatArray:
        table = np.log2(self.probs_matrix)
        table.setflags(write=False)
        return table


class Prediction(BaseModel):
    """Outcome of classifying one instance."""
    model_config = ConfigDict(frozen=True)

    label: int
    per_class_bits: Tuple[int, ...]
    per_class_exact_bits: Tuple[float, ...]
    tie_broken: bool = False
    similarity: Optional[Tuple[float, ...]] = None


class Metrics(BaseModel):
    """Evaluation summary; macro scores are unweighted class means."""
    model_config = ConfigDict(frozen=True)

    accuracy: float = Field(ge=0.0, le=1.0)
    macro_precision: float = Field(ge=0.0, le=1.0)
    macro_recall: float = Field(ge=0.0, le=1.0)
    macro_f1: float = Field(ge=0.0, le=1.0)
    confusion: List[List[int]]


class OptimalitySummary(BaseModel):
    """Result of coding i.i.d. binary draws with the matched Baker's map."""
    model_config = ConfigDict(frozen=True)

    p0: float
    length: int
    trials: int
    entropy: float = Field(description="Source entropy H(p0) in bits per symbol")
    mean_bits_per_symbol: float
    std_error: float = Field(description="Standard error of the mean bits per symbol")
    max_deviation: float = Field(description="Largest |bits/N - H| over trials")
    max_excess_over_empirical: float = Field(description="Largest bits/N minus the draw's own entropy")
    bits_per_symbol: List[float]
    empirical_entropy: List[float]


class CvRecord(BaseModel):
    """Validation score of one (threshold, n) cell on one fold."""
    model_config = ConfigDict(frozen=True)

    threshold: float
    n: int
    fold: int
    macro_f1: float
    mean_macro_f1: float


class TrainReport(BaseModel):
    """Scores of a freshly fitted model on its training rows and the held-out rows."""
    model_config = ConfigDict(frozen=True)

    train: Metrics
    test: Optional[Metrics] = None
    train_counts: Dict[str, int]
    test_counts: Dict[str, int] = Field(default_factory=dict)


class TuneReport(BaseModel):
    """Outcome of the grid search and of the refit on the whole training split."""
    model_config = ConfigDict(frozen=True)

    best_threshold: float
    best_n: int
    best_mean_macro_f1: float
    train: Metrics
    test: Optional[Metrics] = None
