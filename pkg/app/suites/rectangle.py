"""Rectangle identity on lattice closures of random finite point sets."""

from typing import Optional

from app.config import config
from app.core.classify import rectangle_selftest
from app.models.schemas import SuiteResult
from app.utils.batch_processor import SuiteRunner


def run(runner: SuiteRunner, cases: int = 1000, seed: Optional[int] = None) -> SuiteResult:
    seed = config.random_seed if seed is None else seed
    chunk = runner.batch_size
    starts = list(range(0, cases, chunk))

    def check_chunk(start: int) -> Optional[str]:
        failures = rectangle_selftest(min(chunk, cases - start), seed=seed + start)
        return "; ".join(failures) if failures else None

    failures = runner.run("rectangle", starts, check_chunk, describe=lambda s: f"cases {s}..{min(s + chunk, cases) - 1}")
    return SuiteResult(name="rectangle", cases=cases, failures=failures, notes=[f"seed {seed}"])
