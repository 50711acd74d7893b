"""
Configuration Manager - User preferences for geocube

Settings live in an INI file addressed by slash keys such as
"logging/level". Only logging and the sign suite worker count are
configurable; no setting changes a computed result.
"""

import logging
import os
from pathlib import Path
from typing import Any, Optional

from PySide6.QtCore import QSettings

logger = logging.getLogger(__name__)

CONFIG_ENV = "GEOCUBE_CONFIG"
DEFAULT_PATH = Path.home() / ".geocube" / "settings.ini"

TRUE_STRINGS = ("1", "true", "yes", "on")


class ConfigManager:
    """Manages application configuration and user preferences"""

    def __init__(self, path: Optional[Path] = None):
        """
        Initialize configuration manager

        Args:
            path: Settings file; defaults to $GEOCUBE_CONFIG, then
                ~/.geocube/settings.ini
        """
        if path is None:
            path = Path(os.environ[CONFIG_ENV]) if os.environ.get(CONFIG_ENV) else DEFAULT_PATH
        self.path = Path(path)
        self.settings = QSettings(str(self.path), QSettings.Format.IniFormat)
        if self.settings.status() != QSettings.Status.NoError:
            logger.warning(f"Settings file {self.path} could not be read, using defaults")
        logger.info("Config Manager initialized")

    def value(self, key: str, default: Any = None) -> Any:
        return self.settings.value(key, default)

    def set_value(self, key: str, value: Any):
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self.settings.setValue(key, value)
        self.settings.sync()

    def save_log_level(self, level: str):
        """Save console log level name (DEBUG, INFO, WARNING, ...)"""
        self.set_value("logging/level", level.upper())

    def load_log_level(self) -> str:
        level = str(self.value("logging/level", "WARNING")).upper()
        if level not in logging.getLevelNamesMapping():
            logger.warning(f"Unknown log level {level!r} in settings, using WARNING")
            return "WARNING"
        return level

    def save_log_to_file(self, enabled: bool):
        self.set_value("logging/to_file", bool(enabled))

    def load_log_to_file(self) -> bool:
        # INI values come back as strings once the file is reread
        value = self.value("logging/to_file", False)
        if isinstance(value, str):
            return value.strip().lower() in TRUE_STRINGS
        return bool(value)

    def save_log_dir(self, path: str):
        self.set_value("logging/dir", str(path))

    def load_log_dir(self) -> Path:
        return Path(str(self.value("logging/dir", str(Path.home() / ".geocube" / "logs")))).expanduser()

    def save_suite_workers(self, workers: int):
        """Save the default worker count of the sign suite"""
        self.set_value("suite/workers", int(workers))

    def load_suite_workers(self) -> int:
        try:
            workers = int(self.value("suite/workers", 1))
        except (TypeError, ValueError):
            logger.warning("Invalid suite/workers setting, using 1")
            return 1
        return max(workers, 1)
