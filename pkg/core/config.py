"""
Settings for the command-line front end, loaded from an optional JSON file.
"""
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Optional, Union
import json
import logging

from core.errors import ConfigError
from core.resource_manager import STRATEGIES

logger = logging.getLogger(__name__)

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


@dataclass
class Settings:
    """Defaults for commands that leave a value unspecified."""
    default_trials: int = 100
    default_rounds: int = 10000
    workers: int = 1  # 0 = let the resource manager decide
    strategy: str = "balanced"
    log_level: str = "WARNING"

    def validate(self):
        if self.default_trials < 1:
            raise ConfigError(f"default_trials must be >= 1, got {self.default_trials}")
        if self.default_rounds < 1:
            raise ConfigError(f"default_rounds must be >= 1, got {self.default_rounds}")
        if self.workers < 0:
            raise ConfigError(f"workers must be >= 0, got {self.workers}")
        if self.strategy not in STRATEGIES:
            raise ConfigError(f"strategy must be one of {', '.join(STRATEGIES)}, got {self.strategy!r}")
        if self.log_level.upper() not in LOG_LEVELS:
            raise ConfigError(f"log_level must be one of {', '.join(LOG_LEVELS)}, got {self.log_level!r}")


class SettingsManager:
    """Manager for loading and saving settings."""

    def __init__(self, path: Optional[Union[str, Path]] = None):
        self.path = Path(path) if path is not None else None
        self.settings = Settings()
        if self.path is not None:
            self.load_settings()

    def load_settings(self) -> Settings:
        """
        Load settings from the JSON file, keeping defaults for missing keys.

        Raises:
            ConfigError: If the file is unreadable or holds invalid values
        """
        if not self.path.exists():
            raise ConfigError(f"Settings file not found: {self.path}")
        try:
            data = json.loads(self.path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Error loading settings from {self.path}: {e}")
        if not isinstance(data, dict):
            raise ConfigError(f"Settings file {self.path} must hold a JSON object")

        known = {f.name for f in fields(Settings)}
        values = {}
        for key, value in data.items():
            if key not in known:
                logger.warning("Ignoring unknown setting %r in %s", key, self.path)
                continue
            expected = int if key in ("default_trials", "default_rounds", "workers") else str
            if not isinstance(value, expected) or isinstance(value, bool):
                raise ConfigError(f"Setting {key!r} must be {expected.__name__}, got {value!r}")
            values[key] = value

        settings = Settings(**values)
        settings.validate()
        self.settings = settings
        return settings

    def save_settings(self, path: Optional[Union[str, Path]] = None) -> Path:
        """Write the current settings as JSON."""
        target = Path(path) if path is not None else self.path
        if target is None:
            raise ConfigError("No settings path to save to")
        target.write_text(json.dumps(asdict(self.settings), indent=2) + "\n")
        return target
