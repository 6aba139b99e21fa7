"""
Settings - YAML-backed defaults for generation, verification and benchmarks.
"""
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

logger = logging.getLogger(__name__)

CONFIG_ENV = "CHAINPART_CONFIG"
LOG_LEVEL_ENV = "CHAINPART_LOG_LEVEL"
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


class ConfigError(ValueError):
    """Raised when a settings file is missing, unreadable or malformed."""
    pass


def _load_yaml(path: Path) -> Dict[str, Any]:
    try:
        with open(path, "r", encoding="utf-8") as f:
            data = yaml.safe_load(f)
    except OSError as e:
        raise ConfigError(f"Cannot read config {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError(f"Invalid YAML in {path}: {e}") from e
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"Config {path} must be a mapping of sections")
    return data


class Settings:
    """
    Defaults from config/defaults.yaml, optionally overlaid by a user file.

    Args:
        config_path: User YAML file; falls back to $CHAINPART_CONFIG, then to
            the packaged defaults alone
    """

    def __init__(self, config_path: Optional[Union[str, Path]] = None):
        self.data = _load_yaml(Path(__file__).parent / "defaults.yaml")
        if config_path is None:
            config_path = os.environ.get(CONFIG_ENV) or None
        self.source: Optional[Path] = None
        if config_path is not None:
            self.source = Path(config_path)
            self._overlay(_load_yaml(self.source))
            logger.info(f"Loaded settings from {self.source}")

    def _overlay(self, user: Dict[str, Any]) -> None:
        for section, values in user.items():
            if section not in self.data:
                raise ConfigError(f"Unknown config section: {section}")
            if not isinstance(values, dict):
                raise ConfigError(f"Config section {section} must be a mapping")
            unknown = set(values) - set(self.data[section])
            if unknown:
                raise ConfigError(f"Unknown keys in {section}: {', '.join(sorted(unknown))}")
            self.data[section].update(values)

    @property
    def generator(self) -> Dict[str, Any]:
        return self.data["generator"]

    @property
    def verify(self) -> Dict[str, Any]:
        return self.data["verify"]

    @property
    def bench(self) -> Dict[str, Any]:
        return self.data["bench"]

    @property
    def limits(self) -> Dict[str, Any]:
        return self.data["limits"]

    @property
    def log_level(self) -> str:
        """$CHAINPART_LOG_LEVEL if set, else the logging.level setting."""
        level = os.environ.get(LOG_LEVEL_ENV) or self.data["logging"]["level"]
        level = str(level).upper()
        if level not in LOG_LEVELS:
            raise ConfigError(f"Unknown log level: {level}")
        return level
