"""
Batched evaluation of suite cases.

Cases are split into batches and the batches fan out over joblib worker
threads. Every case returns None (pass) or a failure reason; failures come back
in input order so suite reports stay deterministic.
"""

from typing import Callable, List, Optional, Sequence, Tuple, TypeVar

from joblib import Parallel, delayed
from loguru import logger

from app.models.schemas import CaseFailure
from app.utils.error_handlers import ToolkitError, error_tracker

T = TypeVar("T")

CaseCheck = Callable[[T], Optional[str]]


class SuiteRunner:
    """Run a check over many cases with batching and thread fan-out."""

    def __init__(self, workers: Optional[int] = None, batch_size: Optional[int] = None):
        from app.config import config

        self.workers = workers or config.suite_workers
        self.batch_size = batch_size or config.suite_batch_size

    def run(self, name: str, cases: Sequence[T], check: CaseCheck, describe: Callable[[T], str] = str) -> List[CaseFailure]:
        """
        Evaluate `check` on every case.

        Args:
            name: Suite name for logging
            cases: Inputs, each owned by one worker
            check: Returns None on success or a failure reason
            describe: Renders a case for the failure list

        Returns:
            Failures in input order
        """
        batches = [list(enumerate(cases))[i : i + self.batch_size] for i in range(0, len(cases), self.batch_size)]
        logger.info(f"{name}: {len(cases)} cases in {len(batches)} batches on {self.workers} threads")

        if self.workers == 1 or len(batches) <= 1:
            outcomes = [self._run_batch(batch, check) for batch in batches]
        else:
            outcomes = Parallel(n_jobs=self.workers, prefer="threads")(
                delayed(self._run_batch)(batch, check) for batch in batches
            )

        failures: List[CaseFailure] = []
        for batch, results in zip(batches, outcomes):
            for (_, case), reason in zip(batch, results):
                if reason is not None:
                    failures.append(CaseFailure(case=describe(case), reason=reason))
        if failures:
            logger.warning(f"{name}: {len(failures)} failures, first: {failures[0].case}: {failures[0].reason}")
        return failures

    @staticmethod
    def _run_batch(batch: List[Tuple[int, T]], check: CaseCheck) -> List[Optional[str]]:
        results: List[Optional[str]] = []
        for index, case in batch:
            try:
                results.append(check(case))
            except ToolkitError as e:
                results.append(f"{e.error_code}: {e.message}")
            except Exception as e:
                error_tracker.record_error(e, f"case {index}")
                results.append(f"internal error: {e}")
        return results
