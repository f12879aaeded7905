"""
Configuration module for the ordlab toolkit.
Loads settings from the environment (and a .env file); CLI flags override them.
"""

import os
from typing import Dict, Optional

from dotenv import load_dotenv
from loguru import logger

# Load environment variables from .env file
load_dotenv()

_LEVELS = {"TRACE", "DEBUG", "INFO", "SUCCESS", "WARNING", "ERROR", "CRITICAL"}


class Config:
    """Toolkit configuration with environment variables and runtime overrides."""

    def __init__(self):
        self._overrides: Dict[str, str] = {}

    def _get(self, name: str, default: str) -> str:
        if name in self._overrides:
            return self._overrides[name]
        return os.getenv(name, default)

    def override(self, name: str, value: Optional[object]):
        """Apply a CLI flag; None leaves the environment value in place."""
        if value is not None:
            self._overrides[name] = str(value)

    def reset_overrides(self):
        self._overrides.clear()

    def validate(self):
        """Check that numeric and enumerated settings are usable."""
        from app.utils.error_handlers import ConfigurationError

        problems = []
        for name, value in (
            ("DERIVATIVE_BOUND", self.derivative_bound),
            ("EPSILON_ATOMS", self.epsilon_atoms),
            ("SUITE_WORKERS", self.suite_workers),
            ("SUITE_BATCH_SIZE", self.suite_batch_size),
        ):
            if value < 1:
                problems.append(f"{name} must be positive, got {value}")
        if self.output_format not in ("text", "json"):
            problems.append(f"OUTPUT_FORMAT must be text or json, got {self.output_format}")
        if self.log_level.upper() not in _LEVELS:
            problems.append(f"LOG_LEVEL {self.log_level} is not a loguru level")

        if problems:
            error_msg = "; ".join(problems)
            logger.error(error_msg)
            raise ConfigurationError(error_msg, details={"problems": problems})

    def _int(self, name: str, default: int) -> int:
        raw = self._get(name, str(default))
        try:
            return int(raw)
        except ValueError:
            from app.utils.error_handlers import ConfigurationError

            raise ConfigurationError(f"{name} must be an integer, got {raw!r}")

    # Logging
    @property
    def log_level(self) -> str:
        return self._get("LOG_LEVEL", "WARNING")

    @property
    def log_to_file(self) -> bool:
        return self._get("LOG_TO_FILE", "False").lower() == "true"

    @property
    def log_dir(self) -> str:
        return self._get("LOG_DIR", "logs")

    # Computation limits
    @property
    def derivative_bound(self) -> int:
        return self._int("DERIVATIVE_BOUND", 32)

    @property
    def epsilon_atoms(self) -> int:
        return self._int("EPSILON_ATOMS", 8)

    @property
    def random_seed(self) -> int:
        return self._int("RANDOM_SEED", 0)

    # Output
    @property
    def output_format(self) -> str:
        return self._get("OUTPUT_FORMAT", "text").lower()

    # Suites
    @property
    def suite_workers(self) -> int:
        return self._int("SUITE_WORKERS", 4)

    @property
    def suite_batch_size(self) -> int:
        return self._int("SUITE_BATCH_SIZE", 64)

    @property
    def catalog_path(self) -> str:
        return self._get("CATALOG_PATH", os.path.join("data", "catalog", "regions.json"))

    @property
    def default_nu(self) -> str:
        return self._get("DEFAULT_NU", "w")


# Global configuration instance
config = Config()
