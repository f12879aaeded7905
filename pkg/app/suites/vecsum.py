"""Vector sums ω^b copies of [0, ω^a]: rank a + b three ways."""

from typing import Optional, Tuple

from app.core.ordinal import Ordinal, mul, omega_pow, rank_of_ordinal_space
from app.core.spaceterm import OrdSpace, VecSum, oracle_rank, rank
from app.models.schemas import SuiteResult
from app.utils.batch_processor import SuiteRunner


def check_pair(pair: Tuple[int, int]) -> Optional[str]:
    a, b = pair
    expected = Ordinal.of(a + b)
    term = VecSum(omega_pow(b), (OrdSpace(omega_pow(a)),))
    symbolic = rank(term)
    if symbolic != expected:
        return f"vector-sum rule gives {symbolic}, expected {expected}"
    interval = rank_of_ordinal_space(mul(omega_pow(a), omega_pow(b)))
    if interval != expected:
        return f"rank of [0, ω^{a}·ω^{b}] is {interval}, expected {expected}"
    measured = oracle_rank(term)
    if measured != expected:
        return f"oracle gives {measured}, expected {expected}"
    return None


def run(runner: SuiteRunner, limit: int = 4) -> SuiteResult:
    pairs = [(a, b) for a in range(limit + 1) for b in range(limit + 1)]
    failures = runner.run("vecsum", pairs, check_pair, describe=lambda p: f"a={p[0]}, b={p[1]}")
    return SuiteResult(name="vecsum", cases=len(pairs), failures=failures)
