import os
import typer

from chaoscomp.core.logger import logger
from chaoscomp.core.config import config_manager, generate_default_config

WORKSPACE_DIRECTORIES = ("data", "models", "reports")


def initialize(directory: str = ".") -> None:
    """
    Initialize a ChaosComp workspace: chaoscomp.yaml plus the data/, models/
    and reports/ directories. An existing configuration file is left untouched.
    """
    if not os.path.exists(directory):
        logger.step(f"Directory {directory} does not exist. Creating it.")
        try:
            os.makedirs(directory)
        except Exception as e:
            logger.error(f"Failed to create directory {directory}: {e}")
            raise typer.Exit(code=1) from e

    logger.debug(f"Initializing ChaosComp workspace in directory: {directory}")

    try:
        _create_directories(directory)
    except OSError as e:
        logger.error(f"Failed to create necessary directories: {e}")
        raise typer.Exit(code=1) from e

    config_file = os.path.join(directory, config_manager.DEFAULT_CONFIG_FILENAME)
    if not os.path.exists(config_file):
        try:
            generate_default_config(config_path=config_file)
        except Exception as e:
            logger.error(f"Failed to create configuration file: {e}")
            raise typer.Exit(code=1) from e
    else:
        logger.warning(f"Configuration file already exists at {config_file}. Skipping creation.")

    logger.success("ChaosComp workspace initialized successfully.")


def _create_directories(directory: str) -> None:
    for name in WORKSPACE_DIRECTORIES:
        path = os.path.join(directory, name)
        os.makedirs(path, exist_ok=True)
        logger.debug(f"Directory created: {path}")
