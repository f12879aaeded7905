"""The shipped catalog of closed sublattices, each with its expected label."""

import json
import os
from typing import Optional

from loguru import logger

from app.config import config
from app.core.classify import UNKNOWN, classify
from app.models.schemas import Catalog, CatalogEntry, SuiteResult
from app.parsers.documents import parse_region_file
from app.parsers.expressions import parse_ordinal
from app.utils.batch_processor import SuiteRunner
from app.utils.error_handlers import SemanticError


def load_catalog(path: Optional[str] = None) -> Catalog:
    path = path or config.catalog_path
    if not os.path.isfile(path):
        raise SemanticError(f"catalog not found: {path}", error_code="FILE_NOT_FOUND")
    with open(path, encoding="utf-8") as handle:
        catalog = Catalog.model_validate(json.load(handle))
    logger.debug(f"catalog {path}: {len(catalog.entries)} entries")
    return catalog


def check_entry(entry: CatalogEntry) -> Optional[str]:
    region = parse_region_file(entry.region_text)
    result = classify(region, parse_ordinal(entry.top))
    if result.label.kind == UNKNOWN:
        return "classifier returned Unknown"
    if str(result.label) != entry.expected:
        return f"label {result.label}, expected {entry.expected}"
    if entry.expected_algebra and result.algebra != entry.expected_algebra:
        return f"algebra {result.algebra}, expected {entry.expected_algebra}"
    if not result.matches:
        differing = [k for k, v in result.predicted.items() if result.measured.get(k) != v]
        return "predicted and measured invariants differ: " + ", ".join(
            f"{k} {result.predicted[k]} vs {result.measured.get(k)}" for k in differing
        )
    return None


def run(runner: SuiteRunner, path: Optional[str] = None) -> SuiteResult:
    catalog = load_catalog(path)
    failures = runner.run("catalog", catalog.entries, check_entry, describe=lambda e: e.name)
    result = SuiteResult(name="catalog", cases=len(catalog.entries), failures=failures)
    if len(catalog.entries) < 20:
        result.notes.append(f"catalog holds only {len(catalog.entries)} entries")
    return result
