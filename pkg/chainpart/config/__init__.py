"""Configuration loading for chainpart."""
from chainpart.config.settings import ConfigError, Settings

__all__ = ["ConfigError", "Settings"]
