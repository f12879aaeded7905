"""
Error handling and logging utilities for the ordlab toolkit.
"""

import functools
import os
import sys
import traceback
from typing import Any, Callable, Dict, Optional

from loguru import logger

EXIT_OK = 0
EXIT_SUITE_FAILURE = 1
EXIT_PARSE_ERROR = 2
EXIT_SEMANTIC_ERROR = 3
EXIT_INTERNAL_ERROR = 70


def setup_logging(level: Optional[str] = None):
    """Configure loguru: stderr always, a rotating file sink when enabled."""
    from app.config import config

    logger.remove()
    logger.add(
        sys.stderr,
        format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | <cyan>{name}</cyan>:<cyan>{function}</cyan> - <level>{message}</level>",
        level=(level or config.log_level).upper(),
        colorize=True,
    )

    if config.log_to_file:
        os.makedirs(config.log_dir, exist_ok=True)
        logger.add(
            os.path.join(config.log_dir, "ordlab.log"),
            rotation="1 day",
            retention="7 days",
            format="{time:YYYY-MM-DD HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}",
            level="DEBUG",
        )


class ToolkitError(Exception):
    """Toolkit error with structured information and a process exit code."""

    def __init__(
        self,
        message: str,
        exit_code: int = EXIT_SEMANTIC_ERROR,
        error_code: str = None,
        details: Dict[str, Any] = None,
    ):
        self.message = message
        self.exit_code = exit_code
        self.error_code = error_code or f"TOOLKIT_ERROR_{exit_code}"
        self.details = details or {}
        super().__init__(self.message)

    def render(self) -> str:
        return f"error [{self.error_code}]: {self.message}"


class ParseError(ToolkitError):
    """Input text does not match a grammar."""

    def __init__(self, message: str, source: str = "", position: int = 0, details: Dict[str, Any] = None):
        details = details or {}
        details.update({"position": position})
        self.source = source
        self.position = position
        super().__init__(
            message=message,
            exit_code=EXIT_PARSE_ERROR,
            error_code="PARSE_ERROR",
            details=details,
        )

    def render(self) -> str:
        lines = [f"error [PARSE_ERROR] at column {self.position + 1}: {self.message}"]
        if self.source:
            lines.append(f"  {self.source}")
            lines.append("  " + " " * self.position + "^")
        return "\n".join(lines)


class SemanticError(ToolkitError):
    """Well-formed input that violates an operation's precondition."""

    def __init__(self, message: str, error_code: str = "SEMANTIC_ERROR", details: Dict[str, Any] = None):
        super().__init__(
            message=message,
            exit_code=EXIT_SEMANTIC_ERROR,
            error_code=error_code,
            details=details,
        )


class AmbientMismatchError(SemanticError):
    """Operands live in different ambient intervals."""

    def __init__(self, left: Any, right: Any):
        super().__init__(
            f"ambient mismatch: {left} vs {right}",
            error_code="AMBIENT_MISMATCH",
            details={"left": str(left), "right": str(right)},
        )


class UnsupportedTermError(SemanticError):
    """Request outside the hypothesis of the rule that would answer it."""

    def __init__(self, message: str, component: str = None, details: Dict[str, Any] = None):
        details = details or {}
        if component:
            details["component"] = component
        super().__init__(message, error_code="UNSUPPORTED", details=details)


class SizeGuardError(SemanticError):
    """Exhaustive check requested above its size guard."""

    def __init__(self, message: str, details: Dict[str, Any] = None):
        super().__init__(message, error_code="SIZE_GUARD", details=details)


class ConfigurationError(SemanticError):
    """Error related to configuration or environment setup."""

    def __init__(self, message: str, details: Dict[str, Any] = None):
        super().__init__(message, error_code="CONFIGURATION_ERROR", details=details)


class ErrorTracker:
    """Track errors raised while running suites."""

    def __init__(self):
        self.error_counts = {}
        self.recent_errors = []

    def record_error(self, error: Exception, context: str = None):
        """Record an error occurrence."""
        error_type = type(error).__name__
        self.error_counts[error_type] = self.error_counts.get(error_type, 0) + 1

        self.recent_errors.append({"type": error_type, "message": str(error), "context": context})
        if len(self.recent_errors) > 100:
            self.recent_errors.pop(0)

        logger.error(f"Error recorded: {error_type} in {context}: {error}")

    def get_error_summary(self) -> Dict[str, Any]:
        return {
            "error_counts": dict(self.error_counts),
            "recent_errors": self.recent_errors[-10:],
            "total_errors": sum(self.error_counts.values()),
        }

    def reset(self):
        self.error_counts.clear()
        self.recent_errors.clear()


error_tracker = ErrorTracker()


def handle_command_errors(func: Callable[..., int]) -> Callable[..., int]:
    """Map toolkit errors raised by a CLI command to exit codes."""

    @functools.wraps(func)
    def wrapper(*args, **kwargs) -> int:
        try:
            return func(*args, **kwargs)
        except ToolkitError as e:
            logger.debug(f"{func.__name__} failed: {e.error_code} {e.details}")
            print(e.render(), file=sys.stderr)
            return e.exit_code
        except Exception as e:
            error_tracker.record_error(e, f"Command: {func.__name__}")
            logger.error(f"Traceback: {traceback.format_exc()}")
            print(f"error [INTERNAL_ERROR]: {e}", file=sys.stderr)
            return EXIT_INTERNAL_ERROR

    return wrapper


def validate_environment():
    """Validate configuration values and the catalog location on startup."""
    from app.config import config

    try:
        config.validate()
    except ConfigurationError:
        raise
    except Exception as e:
        logger.critical(f"Environment validation failed: {e}")
        raise ConfigurationError(f"Environment setup failed: {e}")

    if not os.path.exists(config.catalog_path):
        logger.warning(f"Catalog not found at {config.catalog_path}")
    logger.debug("Environment validation passed")
