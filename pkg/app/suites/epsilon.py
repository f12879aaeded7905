"""
Squares and T-spaces over ε-numbers, with a finite-rank shadow that the
derivative oracle can verify: the union formula for derivatives of a product
and the square/triangle profile at the separation level.
"""

from typing import List, Optional, Tuple

from app.core.classify import measured_arms
from app.core.ordinal import Ordinal, mul, omega_pow, to_str
from app.core.region import Region
from app.core.spaceterm import KSpace, Triangle, TSpace, rank, separation_level, top_derivative_type
from app.core.strata import StrataSet
from app.models.schemas import SuiteResult
from app.utils.batch_processor import SuiteRunner

Case = Tuple[str, int]


def check_epsilon(n: int) -> Optional[str]:
    eps = Ordinal.epsilon(n)
    if rank(KSpace(eps)) != mul(eps, Ordinal.of(2)):
        return f"rk K(e{n}) = {to_str(rank(KSpace(eps)))}, expected e{n}*2"
    if rank(TSpace(eps)) != eps:
        return f"rk T(e{n}) = {to_str(rank(TSpace(eps)))}, expected e{n}"
    square, triangle = top_derivative_type(KSpace(eps)), top_derivative_type(Triangle(eps))
    if (square.kind, triangle.kind) != ("cross", "chain"):
        return f"shapes {square} and {triangle} do not separate K(e{n}) from its triangle"
    if square.level != eps or triangle.level != eps:
        return f"separation level {square.level} differs from e{n}"
    return None


def box_derivative_union(side: StrataSet, n: int) -> Region:
    """⋃_{i+j=n} ∂^i X × ∂^j X for X = side."""
    out = Region.empty((side.top, side.top))
    for i in range(n + 1):
        out = out.union(Region.box(side.derivative_alpha(Ordinal.of(i)), side.derivative_alpha(Ordinal.of(n - i))))
    return out


def check_union_formula(k: int) -> Optional[str]:
    side = StrataSet.full(omega_pow(k))
    square = Region.box(side, side)
    for n in range(2 * k + 2):
        if not square.derivative_n(n).same_as(box_derivative_union(side, n)):
            return f"∂^{n} of [0,w^{k}]² differs from the union of products"
    return None


def check_profile(k: int) -> Optional[str]:
    alpha = omega_pow(k)
    level = separation_level(Ordinal.of(k))
    side = StrataSet.full(alpha)
    arm = top_derivative_type(KSpace(alpha)).size
    for region, arms, name in ((Region.box(side, side), 2, "square"), (Region.tri(side, side), 1, "triangle")):
        measured = measured_arms(region, level)
        if measured != arms:
            return f"{name} over w^{k}: {measured} arms at level {level}, expected {arms}"
        derived = region.derivative_n(level.to_int())
        if derived.project_x().order_type() != arm:
            return f"{name} over w^{k}: arm type {derived.project_x().order_type()} vs {arm}"
    return None


def check_case(case: Case) -> Optional[str]:
    kind, n = case
    if kind == "epsilon":
        return check_epsilon(n)
    if kind == "union":
        return check_union_formula(n)
    return check_profile(n)


def run(runner: SuiteRunner, max_index: int = 3, max_exponent: int = 3) -> SuiteResult:
    cases: List[Case] = [("epsilon", n) for n in range(max_index + 1)]
    cases += [("union", k) for k in range(1, max_exponent + 1)]
    cases += [("profile", k) for k in range(1, max_exponent + 1)]
    failures = runner.run("epsilon", cases, check_case, describe=lambda c: f"{c[0]} {c[1]}")
    return SuiteResult(
        name="epsilon",
        cases=len(cases),
        failures=failures,
        checks={kind: sum(1 for c in cases if c[0] == kind) for kind in ("epsilon", "union", "profile")},
    )
