import textwrap
from pathlib import Path
from typing import Any, Dict, Optional, Type, Union, get_args

from pydantic import BaseModel
from ruamel.yaml import YAML
from ruamel.yaml.comments import CommentedMap

from chaoscomp.core.logger import logger
from chaoscomp.core.types import CommentedStructure, SerializableData
from chaoscomp.schemas.config import RunConfig

# A flag naming one of these replaces whichever source the project file set
DATA_SOURCE_FIELDS = ("data", "dataset", "synthetic")

CONFIG_HEADER = (
    "===================================================\n"
    "ChaosComp Configuration\n"
    "Generated by `chaoscomp init`\n"
    "Command-line flags override every value below.\n"
    "==================================================="
)


def _nested_model(annotation: Any) -> Optional[Type[BaseModel]]:
    """SyntheticSpec for Optional[SyntheticSpec], HyperGrid for HyperGrid, else None."""
    for candidate in (annotation, *get_args(annotation)):
        if isinstance(candidate, type) and issubclass(candidate, BaseModel):
            return candidate
    return None


def _wrap(description: str) -> str:
    return "\n".join(
        textwrap.fill(line, width=80, subsequent_indent="  ", drop_whitespace=True)
        for line in description.strip().split("\n")
    )


def commented_document(data: SerializableData, model: Type[BaseModel]) -> CommentedStructure:
    """
    Turn a model_dump() mapping into a CommentedMap whose keys carry the
    field descriptions of `model` as leading comments, recursing into
    nested models.
    """
    if not isinstance(data, dict):
        return data  # type: ignore[no-any-return]

    document = CommentedMap()
    for key, value in data.items():
        field = model.model_fields.get(key)
        nested = _nested_model(field.annotation) if field is not None else None
        document[key] = commented_document(value, nested) if nested is not None else value
        if field is not None and field.description:
            document.yaml_set_comment_before_after_key(key, before="\n" + _wrap(field.description))  # type: ignore[no-any-return]
    return document


class ConfigManager:
    """
    Reads and generates chaoscomp.yaml and merges it into a RunConfig.

    ruamel.yaml is used in round-trip mode so generated files keep their
    comments.
    """

    DEFAULT_CONFIG_FILENAME: str = "chaoscomp.yaml"
    MAX_SEARCH_DEPTH: int = 50

    def __init__(self) -> None:
        self.yaml: YAML = YAML()
        self.yaml.preserve_quotes = True
        self.yaml.width = 4096  # no folded lines
        logger.debug("ConfigManager ready (ruamel.yaml round-trip mode)")

    def read_document(self, config_path: Union[str, Path]) -> Dict[str, Any]:
        """
        Raw mapping stored in a configuration file. An empty file is an
        empty mapping.

        Raises:
            FileNotFoundError: the file does not exist
            ValueError: the top level is not a mapping
            ruamel.yaml.YAMLError: the file is not valid YAML
        """
        config_path = Path(config_path)
        if not config_path.exists():
            logger.error(f"Configuration file does not exist: {config_path}")
            raise FileNotFoundError(f"Configuration file does not exist: {config_path}")

        logger.debug(f"Reading {config_path}")
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                document: Any = self.yaml.load(f)  # type: ignore[no-any-return]
        except Exception as e:
            logger.error(f"Cannot parse {config_path}: {e}")
            raise

        if document is None:
            return {}
        if not isinstance(document, dict):
            logger.error(f"{config_path} is not a YAML mapping")
            raise ValueError(f"Configuration file {config_path} does not contain valid YAML dictionary")
        logger.debug(f"Configuration keys: {list(document)}")
        return dict(document)

    def load_config(
        self,
        config_path: Optional[Union[str, Path]] = None,
        overrides: Optional[Dict[str, Any]] = None,
    ) -> RunConfig:
        """
        Build the run configuration.

        Precedence, highest first: `overrides` (command-line flags, None
        entries ignored), the configuration file, CHAOSCOMP_* environment
        variables, defaults.

        Raises:
            pydantic.ValidationError: the merged values are invalid
        """
        values: Dict[str, Any] = self.read_document(config_path) if config_path is not None else {}

        flags = {key: value for key, value in (overrides or {}).items() if value is not None}
        if any(key in flags for key in DATA_SOURCE_FIELDS):
            for key in DATA_SOURCE_FIELDS:
                values.pop(key, None)
        values.update(flags)
        logger.debug(f"Command-line overrides: {sorted(flags)}")

        # Keyword arguments outrank the environment in BaseSettings
        config = RunConfig(**values)
        logger.debug(f"Resolved data source: {config.sources() or 'none'}")
        return config

    def generate_default_config(self, config_path: Optional[Union[str, Path]] = None) -> Path:
        """Write the default RunConfig, commented with its field descriptions."""
        config_path = Path(config_path) if config_path is not None else Path.cwd() / self.DEFAULT_CONFIG_FILENAME
        config_path.parent.mkdir(parents=True, exist_ok=True)
        logger.debug(f"Generating default configuration at {config_path}")

        # model_construct skips the environment, so the file holds true defaults
        defaults = RunConfig.model_construct()
        document = commented_document(defaults.model_dump(mode="python"), RunConfig)
        document.yaml_set_start_comment(CONFIG_HEADER)  # type: ignore[union-attr]
        try:
            with open(config_path, "w", encoding="utf-8") as f:
                self.yaml.dump(document, f)  # type: ignore[no-any-return]
        except OSError as e:
            logger.error(f"Cannot write default configuration to {config_path}: {e}")
            raise
        logger.success(f"Generated default configuration file: {config_path}")
        return config_path

    def find_config_file(self, start_path: Optional[Union[str, Path]] = None) -> Optional[Path]:
        """Nearest chaoscomp.yaml in `start_path` (default: cwd) or one of its parents."""
        start = Path(start_path if start_path is not None else Path.cwd()).resolve()
        for depth, directory in enumerate((start, *start.parents)):
            if depth > self.MAX_SEARCH_DEPTH:
                logger.warning(f"Stopped looking for {self.DEFAULT_CONFIG_FILENAME} after {depth} levels")
                break
            candidate = directory / self.DEFAULT_CONFIG_FILENAME
            if candidate.exists():
                logger.debug(f"Found configuration file at: {candidate}")
                return candidate
        logger.debug(f"No {self.DEFAULT_CONFIG_FILENAME} above {start}")
        return None


config_manager: ConfigManager = ConfigManager()


def load_config(
    config_path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    return config_manager.load_config(config_path, overrides)


def generate_default_config(config_path: Optional[Union[str, Path]] = None) -> Path:
    return config_manager.generate_default_config(config_path)


def find_config_file(start_path: Optional[Union[str, Path]] = None) -> Optional[Path]:
    return config_manager.find_config_file(start_path)
