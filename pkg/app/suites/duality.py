"""Finite duality: round trips, the free Boolean algebra property and sums."""

from typing import Dict, List, Optional, Tuple

from app.core.duality import (
    UNIVERSAL_MAX_SEGMENTS,
    FinBooleanAlgebra,
    FinPoset,
    check_universal_property,
    count_antichains,
    disjoint_sum,
    enumerate_posets,
    final_segments,
    find_isomorphism,
    is_isomorphic,
    lattices_isomorphic,
    prime_filters,
    product,
)
from app.models.schemas import CaseFailure, SuiteResult
from app.utils.batch_processor import SuiteRunner

# labeled posets on n elements, n = 0..7
LABELED_COUNTS = (1, 1, 3, 19, 219, 4231, 130023, 6129859)

ALGEBRA_SIZES = (1, 2, 4, 8, 16)


def representatives(n: int) -> List[FinPoset]:
    """One poset per isomorphism class on n elements."""
    reps: List[FinPoset] = []
    for p in enumerate_posets(n):
        if not any(is_isomorphic(p, q) for q in reps):
            reps.append(p)
    return reps


def check_roundtrip(p: FinPoset) -> Optional[str]:
    back = prime_filters(final_segments(p))
    if find_isomorphism(p, back) is None:
        return "prime filters of fs(P) are not isomorphic to P"
    return None


def check_universal(case: Tuple[FinPoset, int]) -> Optional[str]:
    p, size = case
    if not check_universal_property(p, FinBooleanAlgebra.of_size(size)):
        return f"a monotone map into the {size}-element algebra does not factor uniquely"
    return None


def check_sum(case: Tuple[FinPoset, FinPoset]) -> Optional[str]:
    p, q = case
    if not lattices_isomorphic(final_segments(disjoint_sum(p, q)), product(final_segments(p), final_segments(q))):
        return "fs(P ⊔ Q) is not isomorphic to fs(P) × fs(Q)"
    return None


def _inline(p: FinPoset) -> str:
    return str(p).replace("\n", "; ")


def run(runner: SuiteRunner, max_size: int = 5, sum_total: int = 6) -> SuiteResult:
    failures: List[CaseFailure] = []
    checks: Dict[str, int] = {}

    labeled: List[FinPoset] = []
    for n in range(max_size + 1):
        batch = list(enumerate_posets(n))
        if len(batch) != LABELED_COUNTS[n]:
            failures.append(CaseFailure(case=f"enumerate {n}", reason=f"{len(batch)} labeled posets, expected {LABELED_COUNTS[n]}"))
        labeled.extend(batch)
    failures.extend(runner.run("duality/roundtrip", labeled, check_roundtrip, describe=_inline))
    checks["roundtrip"] = len(labeled)

    reps = {n: representatives(n) for n in range(1, max(sum_total - 1, 1) + 1)}
    small = [p for n in range(1, 5) for p in reps.get(n, []) if count_antichains(p) <= UNIVERSAL_MAX_SEGMENTS]
    universal = [(p, size) for p in small for size in ALGEBRA_SIZES]
    failures.extend(
        runner.run("duality/universal", universal, check_universal, describe=lambda c: f"{_inline(c[0])} into |B|={c[1]}")
    )
    checks["universal"] = len(universal)

    sums = [(p, q) for m in reps for n in reps if m + n <= sum_total for p in reps[m] for q in reps[n]]
    failures.extend(runner.run("duality/sum", sums, check_sum, describe=lambda c: f"{_inline(c[0])} + {_inline(c[1])}"))
    checks["sum"] = len(sums)

    return SuiteResult(name="duality", cases=sum(checks.values()), failures=failures, checks=checks)
