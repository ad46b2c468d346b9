import json
from pathlib import Path
from typing import Any, Union

from pydantic import ValidationError

from chaoscomp.core.logger import logger
from chaoscomp.schemas.model import MODEL_DOCUMENT_VERSION, ChaosCompModel


def save_model(model: ChaosCompModel, path: Union[str, Path]) -> Path:
    """
    Write the model as a versioned JSON document.

    Floats are serialized with their shortest round-trip representation, so a
    reloaded model predicts exactly like the original.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    try:
        path.write_text(model.model_dump_json(indent=2) + "\n", encoding="utf-8")
    except OSError as e:
        logger.error(f"Failed to write model to {path}: {e}")
        raise
    logger.debug(f"Saved model ({model.n_classes} classes, n={model.n}) to {path}")
    return path


def load_model(path: Union[str, Path]) -> ChaosCompModel:
    """
    Read a model document written by `save_model`.

    Raises:
        FileNotFoundError: the file does not exist
        ValueError: malformed document or unsupported version
    """
    path = Path(path)
    if not path.exists():
        logger.error(f"Model file does not exist: {path}")
        raise FileNotFoundError(f"model file does not exist: {path}")

    try:
        document: Any = json.loads(path.read_text(encoding="utf-8"))
    except (json.JSONDecodeError, UnicodeDecodeError) as e:
        raise ValueError(f"malformed model document: {e}") from e

    if not isinstance(document, dict):
        raise ValueError("malformed model document: top level must be an object")
    if "version" not in document:
        raise ValueError("malformed model document: missing version")
    if document["version"] != MODEL_DOCUMENT_VERSION:
        raise ValueError(f"unsupported model document version: {document['version']}")

    try:
        model = ChaosCompModel.model_validate(document)
    except ValidationError as e:
        raise ValueError(f"malformed model document: {e}") from e
    logger.debug(f"Loaded model ({model.n_classes} classes, n={model.n}) from {path}")
    return model
