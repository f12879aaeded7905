"""Ordinal arithmetic laws on random triples below ε₂."""

from functools import cmp_to_key
from typing import List, Optional, Tuple

import numpy as np

from app.config import config
from app.core.ordinal import (
    Ordinal,
    add,
    compare,
    is_indecomposable,
    mul,
    natural_sum,
    to_str,
)
from app.models.schemas import SuiteResult
from app.utils.batch_processor import SuiteRunner

Triple = Tuple[Ordinal, Ordinal, Ordinal]

_ATOMS = (Ordinal.epsilon(0), Ordinal.epsilon(1))


def random_ordinal(rng: np.random.Generator, depth: int = 2) -> Ordinal:
    """Random Cantor normal form below ε₂ with up to three terms and nested exponents."""
    exponents = []
    for _ in range(int(rng.integers(0, 4))):
        draw = rng.random()
        if depth > 0 and draw < 0.15:
            e = _ATOMS[int(rng.integers(0, 2))]
        elif depth > 0 and draw < 0.45:
            e = random_ordinal(rng, depth - 1)
        else:
            e = Ordinal.of(int(rng.integers(0, 4)))
        if all(compare(e, f) != 0 for f in exponents):
            exponents.append(e)
    exponents.sort(key=cmp_to_key(compare), reverse=True)
    return Ordinal.from_terms((e, int(rng.integers(1, 4))) for e in exponents)


def random_triples(count: int, seed: int) -> List[Triple]:
    rng = np.random.default_rng(seed)
    return [(random_ordinal(rng), random_ordinal(rng), random_ordinal(rng)) for _ in range(count)]


def check_triple(triple: Triple) -> Optional[str]:
    a, b, c = triple
    if add(add(a, b), c) != add(a, add(b, c)):
        return "addition is not associative"
    if mul(mul(a, b), c) != mul(a, mul(b, c)):
        return "multiplication is not associative"
    if mul(a, add(b, c)) != add(mul(a, b), mul(a, c)):
        return "left distributivity fails"
    if natural_sum(a, b) != natural_sum(b, a):
        return "natural sum is not commutative"
    if compare(natural_sum(a, b), add(a, b)) < 0:
        return "natural sum lies below the ordinal sum"
    order = compare(b, c)
    if order != -compare(c, b):
        return "comparison is not antisymmetric"
    if order < 0:
        if compare(add(a, b), add(a, c)) >= 0:
            return "a + b < a + c fails for b < c"
        if not a.is_zero and compare(mul(a, b), mul(a, c)) >= 0:
            return "a·b < a·c fails for b < c"
        if compare(add(b, a), add(c, a)) > 0:
            return "b + a <= c + a fails for b < c"
    if not a.is_zero and is_indecomposable(a) and compare(b, a) < 0 and compare(c, a) < 0:
        if compare(add(b, c), a) >= 0:
            return "indecomposable value is not closed under sums below it"
    return None


def run(runner: SuiteRunner, cases: int = 10000, seed: Optional[int] = None) -> SuiteResult:
    triples = random_triples(cases, config.random_seed if seed is None else seed)
    failures = runner.run("arithmetic", triples, check_triple, describe=lambda t: ", ".join(to_str(x) for x in t))
    return SuiteResult(name="arithmetic", cases=len(triples), failures=failures)
