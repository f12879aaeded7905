"""
Acceptance suites. Each suite checks one family of identities over many
generated cases and returns a SuiteResult; `run_suites` runs a selection in
registry order.
"""

from typing import Callable, Dict, Iterable, Optional

from loguru import logger

from app.models.schemas import SuiteResult, SuiteSummary
from app.utils.batch_processor import SuiteRunner

SuiteFunction = Callable[..., SuiteResult]


def _registry() -> Dict[str, SuiteFunction]:
    from app.suites import arithmetic, catalog, duality, epsilon, ranks, rectangle, separation, vecsum

    return {
        "arithmetic": arithmetic.run,
        "ranks": ranks.run,
        "vecsum": vecsum.run,
        "epsilon": epsilon.run,
        "duality": duality.run,
        "separation": separation.run,
        "rectangle": rectangle.run,
        "catalog": catalog.run,
    }


SUITE_NAMES = ("arithmetic", "ranks", "vecsum", "epsilon", "duality", "separation", "rectangle", "catalog")


def run_suites(names: Optional[Iterable[str]] = None, runner: Optional[SuiteRunner] = None) -> SuiteSummary:
    registry = _registry()
    runner = runner or SuiteRunner()
    summary = SuiteSummary()
    for name in names or SUITE_NAMES:
        logger.info(f"suite {name}: starting")
        result = registry[name](runner)
        logger.info(result.line())
        summary.results.append(result)
    return summary


__all__ = ["SUITE_NAMES", "run_suites"]
