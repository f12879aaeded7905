"""
Command groups of the CLI. Each module registers its subcommands on an
argparse subparser and maps parsed arguments to a Report.
"""

import importlib
import os
from types import ModuleType
from typing import Dict

from loguru import logger

from app.utils.error_handlers import SemanticError

COMMAND_GROUPS = ("ord", "set", "region", "dual", "term", "construct", "classify", "suite")

_MODULES = {"ord": "ordinals", "set": "sets", "region": "regions", "dual": "duality", "term": "terms",
            "construct": "construct", "classify": "classify", "suite": "suites"}
_loaded: Dict[str, ModuleType] = {}


def get_command_group(name: str) -> ModuleType:
    """Import a command module on first use."""
    if name not in _loaded:
        logger.debug(f"loading command group {name}")
        _loaded[name] = importlib.import_module(f"app.commands.{_MODULES[name]}")
    return _loaded[name]


def read_text(path: str) -> str:
    if not os.path.isfile(path):
        raise SemanticError(f"input file not found: {path}", error_code="FILE_NOT_FOUND")
    with open(path, encoding="utf-8") as handle:
        return handle.read()
