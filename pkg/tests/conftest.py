import os
from typing import Dict, List

import numpy as np
import pytest

from chaoscomp.core.logger import logger
from chaoscomp.schemas.model import ChaosCompModel, ClassDistribution, ReturnMapModel, ScalerParams


@pytest.fixture(autouse=True)
def _quiet_logger():
    logger.setLevel("INFO")
    yield


@pytest.fixture(autouse=True)
def _isolated_env(monkeypatch):
    # Run configurations must not pick up the developer's shell
    for key in list(os.environ):
        if key.startswith("CHAOSCOMP_"):
            monkeypatch.delenv(key)


@pytest.fixture
def toy_instances() -> Dict[int, List[List[int]]]:
    """Two classes of 4-bit instances whose pooled 2-bit words give the worked distributions."""
    return {
        # (01)(10), (11)(10), (00)(10) -> [1/6, 1/6, 3/6, 1/6]
        0: [[0, 1, 1, 0], [1, 1, 1, 0], [0, 0, 1, 0]],
        # (00)(01), (00)(10), (10)(11) -> [2/6, 1/6, 2/6, 1/6]
        1: [[0, 0, 0, 1], [0, 0, 1, 0], [1, 0, 1, 1]],
    }


@pytest.fixture
def toy_matrix(toy_instances):
    rows = toy_instances[0] + toy_instances[1]
    labels = [0] * len(toy_instances[0]) + [1] * len(toy_instances[1])
    return np.asarray(rows, dtype=np.float64), np.asarray(labels, dtype=np.int64)


@pytest.fixture
def class_one_map() -> ReturnMapModel:
    return ReturnMapModel(probs=(2 / 6, 1 / 6, 2 / 6, 1 / 6))


@pytest.fixture
def gate_inputs() -> np.ndarray:
    return np.asarray([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])


def make_model(distributions, n: int = 2, n_features: int = 4, alpha: float = 0.01) -> ChaosCompModel:
    """Model over already scaled features (identity scaler, no augmentation)."""
    return ChaosCompModel(
        n=n,
        threshold=0.5,
        alpha=alpha,
        pad_symbol=1,
        augment=False,
        scaler=ScalerParams(data_min=(0.0,) * n_features, data_max=(1.0,) * n_features),
        classes=[ClassDistribution(class_id=i, probs=tuple(p)) for i, p in enumerate(distributions)],
        class_names=[f"c{i}" for i in range(len(distributions))],
    )


@pytest.fixture
def model_factory():
    return make_model
