"""
Decision regions of a two-feature model, sampled on a regular lattice for
external plotting.
"""

import csv
from pathlib import Path
from typing import List, NamedTuple, Sequence, Tuple, Union

import numpy as np

from chaoscomp.core.classifier import predict_labels
from chaoscomp.core.logger import logger
from chaoscomp.schemas.model import ChaosCompModel

Bounds = Tuple[float, float, float, float]


class BoundaryPoint(NamedTuple):
    x: float
    y: float
    label: int


def decision_boundary_grid(model: ChaosCompModel, bounds: Bounds, resolution: int) -> List[BoundaryPoint]:
    """
    Classify a resolution x resolution lattice spanning (xmin, xmax, ymin, ymax).

    Points go through the full prediction path. Rows are ordered by x, then y.
    """
    if model.n_features != 2:
        raise ValueError(f"decision boundary needs a model trained on 2 raw features, got {model.n_features}")
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    xmin, xmax, ymin, ymax = bounds
    if xmin > xmax or ymin > ymax:
        raise ValueError("bounds must satisfy xmin <= xmax and ymin <= ymax")

    xx, yy = np.meshgrid(
        np.linspace(xmin, xmax, resolution), np.linspace(ymin, ymax, resolution), indexing="ij"
    )
    points = np.column_stack((xx.ravel(), yy.ravel()))
    labels = predict_labels(points, model)
    logger.debug(f"Classified {points.shape[0]} lattice points")
    return [BoundaryPoint(float(x), float(y), int(label)) for (x, y), label in zip(points, labels)]


def write_boundary(
    rows: Sequence[BoundaryPoint], path: Union[str, Path], class_names: Sequence[str] = ()
) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(["x", "y", "label", "class"])
        for row in rows:
            name = class_names[row.label] if class_names else str(row.label)
            writer.writerow([repr(row.x), repr(row.y), row.label, name])
    logger.debug(f"Wrote {len(rows)} boundary points to {path}")
    return path
