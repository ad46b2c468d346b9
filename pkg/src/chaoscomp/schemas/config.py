from typing import List, Literal, Optional

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings, SettingsConfigDict


def default_thresholds() -> List[float]:
    """0.01, 0.02, ..., 1.00"""
    return [round(step / 100, 2) for step in range(1, 101)]


SyntheticKind = Literal["circles", "moons", "linear", "xor", "nand", "nor"]


class HyperGrid(BaseModel):
    """Hyperparameter grid searched by cross-validation."""
    thresholds: List[float] = Field(
        default_factory=default_thresholds,
        description="Binarization thresholds to try, each in (0, 1]. \n"
                    "Defaults to 0.01 up to 1.00 in steps of 0.01."
    )
    n_values: List[int] = Field(
        default_factory=lambda: [1, 2, 3, 4],
        description="Word lengths (return map orders) to try."
    )
    alpha: float = Field(
        default=0.01,
        gt=0.0,
        description="Laplace smoothing constant, fixed during the search."
    )
    folds: int = Field(
        default=5,
        ge=2,
        description="Number of stratified cross-validation folds."
    )

    @field_validator("thresholds")
    @classmethod
    def _thresholds_in_range(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("at least one threshold is required")
        if any(not (0.0 < t <= 1.0) for t in value):
            raise ValueError("thresholds must lie in (0, 1]")
        return value

    @field_validator("n_values")
    @classmethod
    def _orders_positive(cls, value: List[int]) -> List[int]:
        if not value:
            raise ValueError("at least one word length is required")
        if any(n < 1 for n in value):
            raise ValueError("word lengths must be >= 1")
        return value


class TrainConfig(BaseModel):
    """Settings that define one trained classifier."""
    n: int = Field(default=4, ge=1)
    threshold: float = Field(default=0.5, gt=0.0, le=1.0)
    alpha: float = Field(default=0.01, gt=0.0)
    pad_symbol: Literal[0, 1] = 1


class SyntheticSpec(BaseModel):
    """Parameters of a generated toy dataset."""
    kind: SyntheticKind = Field(
        default="xor",
        description="circles, moons, linear, or one of the logic gates xor, nand, nor."
    )
    samples: int = Field(
        default=250,
        ge=1,
        description="Samples per class. Logic gates always have exactly four rows."
    )
    noise: float = Field(
        default=0.1,
        ge=0.0,
        description="Gaussian noise level (circles, moons); blob spread is 10x this for linear."
    )
    seed: int = Field(
        default=90,
        description="Random seed of the generator."
    )


class RunConfig(BaseSettings):
    """
    Configuration of a ChaosComp run.

    Read from chaoscomp.yaml, overridable through CHAOSCOMP_* environment
    variables and, with the highest priority, command-line flags.
    """
    model_config = SettingsConfigDict(
        env_prefix="CHAOSCOMP_",
        env_nested_delimiter="__",
        extra="forbid",
    )

    data: Optional[str] = Field(
        default=None,
        description="\nPath of the input CSV file (header row, numeric features)."
    )
    dataset: Optional[str] = Field(
        default=None,
        description="\nName of a benchmark dataset (iris, breast_cancer, wine ship with scikit-learn;\nseeds, banknote, ionosphere are fetched from OpenML), used instead of a CSV file."
    )
    synthetic: Optional[SyntheticSpec] = Field(
        default=None,
        description="\nGenerated dataset, used instead of a CSV file."
    )
    label_col: Optional[str] = Field(
        default=None,
        description="\nName of the label column. Defaults to the last column."
    )
    test_fraction: float = Field(
        default=0.2,
        ge=0.0,
        lt=1.0,
        description="\nFraction of rows held out for testing. 0 trains on every row (no hold-out)."
    )
    seed: int = Field(
        default=90,
        description="\nSeed for every random choice (split, folds, synthetic data)."
    )
    n: int = Field(
        default=4,
        ge=1,
        description="\nWord length of the n-th return map used by `train`."
    )
    threshold: float = Field(
        default=0.5,
        gt=0.0,
        le=1.0,
        description="\nBinarization threshold used by `train`."
    )
    alpha: float = Field(
        default=0.01,
        gt=0.0,
        description="\nLaplace smoothing constant."
    )
    pad_symbol: Literal[0, 1] = Field(
        default=1,
        description="\nSymbol appended when the feature count is not a multiple of n."
    )
    augment: bool = Field(
        default=True,
        description="\nAppend the sum of squares of the features (only when there are fewer than 30)."
    )
    cap_per_class: Optional[int] = Field(
        default=None,
        ge=1,
        description="\nKeep at most this many training rows per class (applied after the split)."
    )
    jobs: int = Field(
        default=1,
        ge=1,
        description="\nParallel workers for the grid search. Results do not depend on it."
    )
    grid: HyperGrid = Field(
        default_factory=HyperGrid,
        description="\nHyperparameter grid for `tune`."
    )
    model_out: str = Field(
        default="models/model.json",
        description="\nWhere `train` and `tune` write the model document."
    )
    metrics_out: Optional[str] = Field(
        default=None,
        description="\nOptional path for the metrics JSON document."
    )
    cv_table_out: str = Field(
        default="reports/cv_table.csv",
        description="\nWhere `tune` writes the cross-validation table."
    )

    @model_validator(mode="after")
    def _consistent(self) -> "RunConfig":
        if len(self.sources()) > 1:
            raise ValueError("choose exactly one data source: data, dataset or synthetic")
        outputs = [p for p in (self.model_out, self.metrics_out, self.cv_table_out) if p]
        if len(set(outputs)) != len(outputs):
            raise ValueError("output paths must be distinct")
        return self

    def train_config(self) -> TrainConfig:
        return TrainConfig(n=self.n, threshold=self.threshold, alpha=self.alpha, pad_symbol=self.pad_symbol)

    def sources(self) -> List[str]:
        return [name for name in ("data", "dataset", "synthetic") if getattr(self, name) is not None]

    def require_source(self) -> str:
        """Name of the single configured data source."""
        sources = self.sources()
        if len(sources) != 1:
            raise ValueError("no data source configured: pass --data, --dataset or --kind")
        return sources[0]
