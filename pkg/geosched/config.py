"""
Application settings for geosched.

Handles loading settings that are not part of a scenario (worker threads,
log level, report directory) from environment variables, an optional
settings file and default values.
"""

from __future__ import annotations

import json
import logging
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Optional

from dotenv import load_dotenv

from geosched.constants import (
    DEFAULT_CONFIG_FILE,
    DEFAULT_OUTPUT_DIR,
    DEFAULT_THREADS,
    THREADS_ENV_VAR,
)

logger = logging.getLogger(__name__)


@dataclass
class Config:
    """
    Process-wide settings for geosched.

    Settings are loaded from (in order of precedence):
    1. Environment variables (GEOSCHED_*), including a local .env file
    2. Settings file (~/.geosched/config.json)
    3. Default values

    Example:
        config = Config.load()
        print(config.threads)
    """

    threads: int = field(default_factory=lambda: min(DEFAULT_THREADS, os.cpu_count() or 1))
    output_dir: Path = field(default_factory=lambda: DEFAULT_OUTPUT_DIR)
    log_level: str = "WARNING"

    def __post_init__(self) -> None:
        """Normalise types and clamp the worker count."""
        self.output_dir = Path(self.output_dir)
        self.threads = max(1, int(self.threads))
        self.log_level = str(self.log_level).upper()

    @classmethod
    def load(cls, config_path: Optional[Path] = None) -> Config:
        """
        Load settings from file and environment.

        Args:
            config_path: Optional path to a JSON settings file. If not
                        provided, uses ~/.geosched/config.json when present.

        Returns:
            Config instance with loaded values.
        """
        load_dotenv()

        config_path = config_path or DEFAULT_CONFIG_FILE
        config_data: dict[str, Any] = {}

        if config_path.exists():
            try:
                with open(config_path) as f:
                    config_data = json.load(f)
                logger.debug(f"Loaded settings from {config_path}")
            except (json.JSONDecodeError, OSError) as e:
                logger.warning(f"Failed to load settings from {config_path}: {e}")

        config_data = cls._apply_env_overrides(config_data)
        return cls._from_dict(config_data)

    @classmethod
    def _apply_env_overrides(cls, config_data: dict[str, Any]) -> dict[str, Any]:
        """Apply environment variable overrides to settings data."""
        env_mappings = {
            THREADS_ENV_VAR: "threads",
            "GEOSCHED_OUTPUT_DIR": "output_dir",
            "GEOSCHED_LOG_LEVEL": "log_level",
        }

        for env_var, config_key in env_mappings.items():
            value = os.environ.get(env_var)
            if value is not None:
                config_data[config_key] = parse_scalar(value)

        return config_data

    @classmethod
    def _from_dict(cls, data: dict[str, Any]) -> Config:
        """Create Config from dictionary."""
        defaults = cls()
        return cls(
            threads=data.get("threads", defaults.threads),
            output_dir=Path(data.get("output_dir", defaults.output_dir)),
            log_level=data.get("log_level", defaults.log_level),
        )

    def to_dict(self) -> dict[str, Any]:
        """Convert settings to dictionary."""
        return {
            "threads": self.threads,
            "output_dir": str(self.output_dir),
            "log_level": self.log_level,
        }


def parse_scalar(value: str) -> Any:
    """Parse an environment or command-line value to the appropriate type."""
    lowered = value.strip().lower()
    if lowered in ("true", "yes"):
        return True
    if lowered in ("false", "no"):
        return False

    try:
        return int(value)
    except ValueError:
        pass

    try:
        return float(value)
    except ValueError:
        pass

    return value


# Global config instance (lazy loaded)
_config: Optional[Config] = None


def get_config() -> Config:
    """Get the global settings instance."""
    global _config
    if _config is None:
        _config = Config.load()
    return _config


def reload_config(config_path: Optional[Path] = None) -> Config:
    """Reload settings from file and environment."""
    global _config
    _config = Config.load(config_path)
    return _config
