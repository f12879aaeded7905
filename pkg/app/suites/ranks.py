"""Symbolic rank of space terms against derivative iteration on their regions,
and closed-form ranks of ordinal intervals."""

from typing import List, Optional

import numpy as np

from app.config import config
from app.core.ordinal import OMEGA, Ordinal, add, mul, omega_pow, rank_of_ordinal_space, to_str
from app.core.spaceterm import (
    DisjSum,
    KSpace,
    OrdSpace,
    Plank,
    Prod,
    SpaceTerm,
    Triangle,
    TSpace,
    VecSum,
    oracle_rank,
    rank,
)
from app.core.strata import StrataSet
from app.models.schemas import SuiteResult
from app.suites.arithmetic import random_ordinal
from app.utils.batch_processor import SuiteRunner


def parameters() -> List[Ordinal]:
    w2, w3 = omega_pow(2), omega_pow(3)
    return [
        Ordinal.of(1),
        Ordinal.of(2),
        Ordinal.of(3),
        OMEGA,
        w2,
        w3,
        add(w2, OMEGA),
        add(w3, mul(w2, Ordinal.of(2))),
    ]


def rank_terms() -> List[SpaceTerm]:
    """Ordinal intervals, products, planks, squares, triangles, T-spaces, vector and disjoint sums."""
    params = parameters()
    terms: List[SpaceTerm] = [OrdSpace(p) for p in params]
    terms += [Prod(OrdSpace(p), OrdSpace(q)) for p in params for q in params]
    terms += [Plank(p, q) for p in params for q in params]
    terms += [KSpace(p) for p in params]
    terms += [Triangle(p) for p in params]
    terms += [TSpace(p) for p in params]
    terms += [VecSum(omega_pow(k), (OrdSpace(p),)) for k in (1, 2, 3) for p in params]
    terms += [DisjSum(OrdSpace(p), OrdSpace(q)) for p in params for q in params]
    return terms


def check_term(term: SpaceTerm) -> Optional[str]:
    symbolic = rank(term)
    measured = oracle_rank(term)
    if measured is None:
        return f"oracle did not reach the empty set (symbolic {to_str(symbolic)})"
    if measured != symbolic:
        return f"symbolic {to_str(symbolic)} vs oracle {to_str(measured)}"
    return None


def interval_tops(count: int = 200, seed: Optional[int] = None) -> List[Ordinal]:
    """The term parameters, a few towers and ε-atoms, then seeded random tops."""
    rng = np.random.default_rng(config.random_seed if seed is None else seed)
    tops = parameters() + [
        Ordinal.of(0),
        add(mul(omega_pow(2), Ordinal.of(3)), OMEGA),
        omega_pow(OMEGA),
        omega_pow(add(OMEGA, Ordinal.of(1))),
        Ordinal.epsilon(0),
        add(mul(Ordinal.epsilon(1), Ordinal.of(2)), OMEGA),
    ]
    return tops + [random_ordinal(rng) for _ in range(count)]


def check_interval(top: Ordinal) -> Optional[str]:
    interval = StrataSet.full(top)
    expected = rank_of_ordinal_space(top)
    measured = interval.cb_rank()
    if measured != expected:
        return f"cb_rank {to_str(measured)} vs rank_of_ordinal_space {to_str(expected)}"
    single_top = top.is_zero if top.is_finite else top.leading_coefficient == 1
    if interval.is_unitary() != single_top:
        return f"unitary is {not single_top}, expected {single_top}"
    return None


def run(runner: SuiteRunner, intervals: int = 200) -> SuiteResult:
    terms = rank_terms()
    tops = interval_tops(intervals)
    failures = runner.run("ranks", terms, check_term)
    failures += runner.run("ranks/intervals", tops, check_interval, describe=lambda t: f"[0,{to_str(t)}]")
    return SuiteResult(
        name="ranks",
        cases=len(terms) + len(tops),
        failures=failures,
        checks={"terms": len(terms), "intervals": len(tops)},
    )
