"""Configuration loading"""

from pathlib import Path
from typing import Any, Optional
import yaml
from loguru import logger
from mahlerlab.exceptions import ConfigurationError


class ConfigLoader:
    """Load the YAML run configuration and expose it as a plain dictionary."""

    def __init__(self, path: str):
        self.path = Path(path)
        self.config = self.load()

    def load(self) -> dict:
        logger.debug(f"Loading configuration: {self.path}")
        try:
            with open(self.path, "r") as file:
                config = yaml.safe_load(file) or {}
        except FileNotFoundError as e:
            logger.error(f"Configuration file not found: {e}")
            raise ConfigurationError(f"configuration file not found: {self.path}") from e
        except yaml.YAMLError as e:
            logger.error(f"Malformed configuration file {self.path}: {e}")
            raise ConfigurationError(f"malformed configuration file: {self.path}") from e

        if not isinstance(config, dict):
            raise ConfigurationError(f"configuration root must be a mapping: {self.path}")
        return config

    def get(self, dotted: str, default: Optional[Any] = None) -> Any:
        """Fetch a nested value with a dotted key, e.g. ``tolerances.measure_identity``."""
        node: Any = self.config
        for part in dotted.split("."):
            if not isinstance(node, dict) or part not in node:
                return default
            node = node[part]
        return node
