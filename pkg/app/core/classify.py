"""
Classification of closed sublattices of [0,Ω]².

"Uncountable" is read as "cofinal in Ω": a set X ⊆ [0,Ω] counts as
uncountable when Ω is an accumulation point of X. Every result carries that
stamp. The classifier follows the case analysis on the top row and column of
the region and reports a label together with predicted and measured invariants;
it never claims a homeomorphism.
"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger

from app.core.ordinal import (
    ZERO,
    Ordinal,
    add,
    compare,
    is_indecomposable,
    mul,
    omax,
    omega_pow,
    pretty,
    successor,
)
from app.core.region import GT, Region, lattice_closure
from app.core.spaceterm import (
    KSpace,
    OrdSpace,
    Plank,
    SpaceTerm,
    Triangle,
    is_unitary,
    rank,
    separation_level,
    top_point_count,
)
from app.core.strata import StrataSet, predecessor
from app.utils.error_handlers import SemanticError

INTERPRETATION = "uncountable := cofinal in Ω"

COUNTABLE = "Countable"
PLANK = "Plank"
FULL_SQUARE = "FullSquare"
TRIANGLE = "Triangle"
ORDINAL_SPACE = "OrdinalSpace"
UNKNOWN = "Unknown"


@dataclass(frozen=True)
class ClassLabel:
    kind: str
    param: Optional[Ordinal] = None

    @property
    def is_countable(self) -> bool:
        return self.kind == COUNTABLE

    def __str__(self) -> str:
        if self.param is not None:
            return f"{self.kind}({self.param})"
        return self.kind


UNKNOWN_LABEL = ClassLabel(UNKNOWN)


def canonical(gamma: Ordinal) -> Ordinal:
    """Representative of γ for which [0, γ] has the same rank and degree."""
    if gamma.is_finite:
        return gamma
    return mul(omega_pow(gamma.leading_exponent), Ordinal.of(gamma.leading_coefficient))


def plank_label(gamma: Ordinal) -> ClassLabel:
    gamma = canonical(gamma)
    return ClassLabel(ORDINAL_SPACE) if gamma.is_zero else ClassLabel(PLANK, gamma)


def _plank_param(label: ClassLabel) -> Optional[Ordinal]:
    if label.kind == ORDINAL_SPACE:
        return ZERO
    if label.kind == PLANK:
        return label.param
    return None


def combine(a: ClassLabel, b: ClassLabel) -> ClassLabel:
    """Label of a clopen disjoint union: Λa ⊕ Λb = Λ(a+1+b), squares absorb planks, countable parts vanish."""
    if UNKNOWN in (a.kind, b.kind):
        return UNKNOWN_LABEL
    if a.is_countable and b.is_countable:
        return ClassLabel(COUNTABLE, canonical(add(add(a.param, Ordinal.of(1)), b.param)))
    if a.is_countable:
        return b
    if b.is_countable:
        return a
    if FULL_SQUARE in (a.kind, b.kind) and TRIANGLE not in (a.kind, b.kind):
        return ClassLabel(FULL_SQUARE)
    pa, pb = _plank_param(a), _plank_param(b)
    if pa is None or pb is None:
        return UNKNOWN_LABEL
    return plank_label(add(add(pa, Ordinal.of(1)), pb))


def algebra_label(label: ClassLabel) -> str:
    if label.kind == ORDINAL_SPACE:
        return "F(ω₁)"
    if label.kind == FULL_SQUARE:
        return "F(ω₁⊎ω₁)"
    if label.kind == PLANK:
        return f"F(ω₁⊎{pretty(label.param)})"
    if label.kind == TRIANGLE:
        return "F(ω₁×2)"
    if label.kind == COUNTABLE:
        return f"F({pretty(label.param)})"
    return "unknown"


# Helpers over [0, Ω]


def _cofinal(s: StrataSet, omega: Ordinal) -> bool:
    return s.acc().contains(omega)


def _copy_of_top(s: StrataSet, omega: Ordinal) -> bool:
    """Whether the closed set s has order type Ω + 1, i.e. is homeomorphic to [0, Ω]."""
    return s.order_type() == successor(omega)


def _side_label(a: StrataSet, b: StrataSet, omega: Ordinal) -> Optional[ClassLabel]:
    """Label of the closed rectangle a × b from the order types of its sides; None when countable."""
    full_a, full_b = _copy_of_top(a, omega), _copy_of_top(b, omega)
    if full_a and full_b:
        return ClassLabel(FULL_SQUARE)
    if full_a:
        return plank_label(predecessor(b.order_type()))
    if full_b:
        return plank_label(predecessor(a.order_type()))
    if _cofinal(a, omega) or _cofinal(b, omega):
        logger.warning("a side is cofinal in Ω without being a copy of [0,Ω]")
        return UNKNOWN_LABEL
    return None


def _open_below(top: Ordinal, omega: Ordinal) -> StrataSet:
    return StrataSet.below(top, omega)


def _between(top: Ordinal, a: Ordinal, b: Ordinal) -> StrataSet:
    return StrataSet.interval(top, a, b)


def _strictly_between(top: Ordinal, a: Ordinal, b: Ordinal) -> StrataSet:
    """(a, b)."""
    return StrataSet.above(top, a).intersect(StrataSet.below(top, b))


def is_countable_analog(k: Region, omega: Optional[Ordinal] = None) -> bool:
    omega = omega or k.ambient[0]
    return not _cofinal(k.project_x(), omega) and not _cofinal(k.project_y(), omega)


def countable_label(k: Region, bound: Optional[int] = None) -> ClassLabel:
    """Countable(σ) with σ = ω^r·n from rank r and top degree n."""
    if k.is_empty:
        return ClassLabel(COUNTABLE, ZERO)
    measured = k.cb_rank_finite(bound)
    if measured.value is None:
        return UNKNOWN_LABEL
    degree = _top_degree(k, bound)
    if degree is None:
        return UNKNOWN_LABEL
    r = measured.value
    sigma = Ordinal.of(degree - 1) if r.is_zero else mul(omega_pow(r), Ordinal.of(degree))
    return ClassLabel(COUNTABLE, sigma)


def _top_degree(k: Region, bound: Optional[int] = None) -> Optional[int]:
    chain = k.derivative_chain(bound)
    if not chain[-1].is_empty or len(chain) < 2:
        return None
    last = chain[-2]
    if not last.is_finite():
        return None
    return len(last.points())


# Rectangle identity


def rectangle_decomposition(
    k: Region,
    alpha0: Ordinal,
    alpha1: Ordinal,
    beta0: Ordinal,
    beta1: Ordinal,
    check_lattice: bool = False,
) -> Tuple[StrataSet, StrataSet]:
    """A, B with k ∩ ([α0,α1] × [β0,β1]) = A × B, verified."""
    if compare(alpha0, alpha1) > 0 or compare(beta0, beta1) > 0:
        raise SemanticError("rectangle corners are out of order", error_code="BAD_RECTANGLE")
    if not k.contains((alpha0, beta1)) or not k.contains((alpha1, beta0)):
        raise SemanticError(
            f"corners ({alpha0}, {beta1}) and ({alpha1}, {beta0}) must lie in the region",
            error_code="BAD_RECTANGLE",
        )
    if check_lattice and not k.is_sublattice():
        raise SemanticError("region is not a sublattice", error_code="NOT_SUBLATTICE")
    top_x, top_y = k.ambient
    xs = _between(top_x, alpha0, alpha1)
    ys = _between(top_y, beta0, beta1)
    a = k.section_x(beta0).intersect(xs)
    b = k.section_y(alpha0).intersect(ys)
    if not k.within(xs, ys).same_as(Region.box(a, b)):
        raise SemanticError(
            "rectangle identity fails, so the region is not a sublattice",
            error_code="NOT_SUBLATTICE",
            details={"box": f"[{alpha0},{alpha1}] x [{beta0},{beta1}]"},
        )
    return a, b


def rectangle_selftest(cases: int = 1000, side: int = 8, seed: int = 0, points: int = 4) -> List[str]:
    """Rectangle identity on lattice closures of random point sets in [0,side]²; returns failures."""
    rng = np.random.default_rng(seed)
    top = Ordinal.of(side)
    failures: List[str] = []
    for case in range(cases):
        raw = rng.integers(0, side + 1, size=(int(rng.integers(1, points + 1)), 2))
        pts = [(Ordinal.of(int(x)), Ordinal.of(int(y))) for x, y in raw]
        k = lattice_closure(pts, (top, top))
        members = k.points()
        # corners (a0, b1) = p and (a1, b0) = q
        corners = [(p, q) for p in members for q in members if compare(p[0], q[0]) <= 0 and compare(q[1], p[1]) <= 0]
        p, q = corners[int(rng.integers(0, len(corners)))]
        try:
            a, b = rectangle_decomposition(k, p[0], q[0], q[1], p[1])
        except SemanticError as exc:
            failures.append(f"case {case}: {exc.message}")
            continue
        expected = {(x, y) for x, y in members if compare(p[0], x) <= 0 and compare(x, q[0]) <= 0 and compare(q[1], y) <= 0 and compare(y, p[1]) <= 0}
        product = {(x, y) for x in a.points() for y in b.points()}
        if expected != product:
            failures.append(f"case {case}: brute force disagrees")
    logger.info(f"rectangle self-test: {cases} cases, {len(failures)} failures")
    return failures


# Bounded decomposition


@dataclass
class Decomposition:
    label: ClassLabel
    notes: List[str] = field(default_factory=list)
    rectangle: Optional[Tuple[Ordinal, Ordinal, Ordinal, Ordinal]] = None


def bounded_plank_decomposition(k: Region, theta: Ordinal, omega: Optional[Ordinal] = None, bound: Optional[int] = None) -> Decomposition:
    """Label of a closed sublattice of [0,Ω] × [0,θ] with θ < Ω."""
    omega = omega or k.ambient[0]
    top_x, top_y = k.ambient
    if compare(theta, omega) >= 0:
        raise SemanticError(f"θ = {theta} must lie below Ω = {omega}", error_code="NOT_BOUNDED")
    if not k.project_y().issubset(_between(top_y, ZERO, theta)):
        raise SemanticError(f"region reaches above θ = {theta}", error_code="NOT_BOUNDED")
    if k.is_empty:
        return Decomposition(ClassLabel(COUNTABLE, ZERO), ["empty part"])

    tail = _strictly_between(top_x, theta, omega)
    rows = StrataSet.empty(top_y)
    reach = theta
    for piece in k.pieces:
        inside = piece.xs.intersect(_open_below(top_x, omega))
        if GT in piece.rel and _cofinal(piece.xs.intersect(tail), omega):
            rows = rows.union(piece.ys)
        elif not inside.is_empty:
            reach = omax(reach, inside.supremum()[0])
    if rows.is_empty:
        return Decomposition(countable_label(k, bound), ["no row is cofinal in Ω"])

    beta0 = rows.minimum()
    beta1 = rows.supremum()[0]
    rho = successor(reach)
    row = k.section_x(beta1).intersect(_strictly_between(top_x, rho, omega))
    if row.is_empty:
        logger.warning(f"row {beta1} has no point beyond {rho}")
        return Decomposition(UNKNOWN_LABEL, [f"row {beta1} is not cofinal"])
    alpha0 = row.minimum()
    a, b = rectangle_decomposition(k, alpha0, omega, beta0, beta1)

    box = Region.box(_between(top_x, alpha0, omega), _between(top_y, beta0, beta1))
    rest = k.difference(box)
    notes = [f"rows cofinal in Ω: {rows}", f"rectangle [{alpha0},{omega}] x [{beta0},{beta1}]"]
    if not _copy_of_top(a, omega):
        notes.append(f"cofinal rows have order type {a.order_type()}, not {successor(omega)}")
        return Decomposition(UNKNOWN_LABEL, notes, (alpha0, omega, beta0, beta1))
    if not rest.is_empty and not is_countable_analog(rest, omega):
        notes.append("remainder is not countable")
        return Decomposition(UNKNOWN_LABEL, notes, (alpha0, omega, beta0, beta1))
    gamma = predecessor(b.order_type())
    return Decomposition(plank_label(gamma), notes, (alpha0, omega, beta0, beta1))


# Main case analysis


@dataclass
class Classification:
    label: ClassLabel
    case: int
    omega: Ordinal
    transposed: bool = False
    parts: Dict[str, ClassLabel] = field(default_factory=dict)
    predicted: Dict[str, str] = field(default_factory=dict)
    measured: Dict[str, str] = field(default_factory=dict)
    notes: List[str] = field(default_factory=list)
    interpretation: str = INTERPRETATION

    @property
    def algebra(self) -> str:
        return algebra_label(self.label)

    @property
    def matches(self) -> bool:
        if self.label.kind == UNKNOWN:
            return False
        return all(self.measured.get(key) == value for key, value in self.predicted.items())


def case_one_parts(k: Region, omega: Ordinal, delta: Ordinal) -> Tuple[Region, Region, Region]:
    """U = k ∩ [0,Ω]×[0,δ], V = k ∩ [0,δ]×(δ,Ω], W = k ∩ (δ,Ω]²."""
    top_x, top_y = k.ambient
    low_y = _between(top_y, ZERO, delta)
    high_x = StrataSet.above(top_x, delta)
    high_y = StrataSet.above(top_y, delta)
    u = k.within(StrataSet.full(top_x), low_y)
    v = k.within(_between(top_x, ZERO, delta), high_y)
    w = k.within(high_x, high_y)
    return u, v, w


def classify(k: Region, omega: Optional[Ordinal] = None, bound: Optional[int] = None, check: bool = True) -> Classification:
    omega = omega or omax(*k.ambient)
    if omega.is_finite or not is_indecomposable(omega):
        raise SemanticError(f"Ω must be an infinite indecomposable ordinal, got {omega}", error_code="BAD_TOP")
    k = k.with_ambient((omega, omega))
    if k.is_empty:
        raise SemanticError("cannot classify the empty region")
    if check:
        if not k.is_closed():
            raise SemanticError("region is not closed", error_code="NOT_CLOSED")
        if not k.is_sublattice():
            raise SemanticError("region is not a sublattice", error_code="NOT_SUBLATTICE")

    below = _open_below(omega, omega)
    top_row = k.section_x(omega).intersect(below)
    top_col = k.section_y(omega).intersect(below)
    logger.debug(f"classify: top row {top_row}, top column {top_col}")

    if not top_row.is_empty and not top_col.is_empty:
        result = _case_one(k, omega, top_row, top_col, bound)
    elif top_row.is_empty and top_col.is_empty:
        if is_countable_analog(k, omega):
            result = Classification(countable_label(k, bound), 2, omega, notes=["both projections bounded below Ω"])
        elif _copy_of_top(k.project_x(), omega) or _copy_of_top(k.project_y(), omega):
            result = Classification(ClassLabel(ORDINAL_SPACE), 2, omega)
        else:
            result = Classification(UNKNOWN_LABEL, 2, omega, notes=["no projection is a copy of [0,Ω]"])
    else:
        result = _case_three(k, omega, top_row, bound)
    if result.label.kind == UNKNOWN and k.same_as(Region.box(k.project_x(), k.project_y())):
        label = _side_label(k.project_x(), k.project_y(), omega)
        if label is not None and label.kind != UNKNOWN:
            result.label = label
            result.notes.append("region is a rectangle, labeled by the order types of its sides")
    _attach_invariants(result, k, bound)
    return result


def _case_one(k: Region, omega: Ordinal, top_row: StrataSet, top_col: StrataSet, bound: Optional[int]) -> Classification:
    delta = omax(top_row.minimum(), top_col.minimum())
    u, v, w = case_one_parts(k, omega, delta)
    parts: Dict[str, ClassLabel] = {}
    notes = [f"δ = {delta}"]

    lower = bounded_plank_decomposition(u, delta, omega, bound)
    parts["U"] = lower.label
    notes.extend(f"U: {n}" for n in lower.notes)
    left = bounded_plank_decomposition(v.transpose(), delta, omega, bound) if not v.is_empty else Decomposition(ClassLabel(COUNTABLE, ZERO))
    parts["V"] = left.label
    parts["W"] = _product_label(w, omega, bound)

    label = combine(combine(parts["U"], parts["V"]), parts["W"])
    return Classification(label, 1, omega, parts=parts, notes=notes)


def _product_label(w: Region, omega: Ordinal, bound: Optional[int]) -> ClassLabel:
    if w.is_empty:
        return ClassLabel(COUNTABLE, ZERO)
    a, b = w.project_x(), w.project_y()
    if not w.same_as(Region.box(a, b)):
        logger.warning("upper part is not a rectangle")
        return UNKNOWN_LABEL
    label = _side_label(a, b, omega)
    return countable_label(w, bound) if label is None else label


def _case_three(k: Region, omega: Ordinal, top_row: StrataSet, bound: Optional[int]) -> Classification:
    transposed = not top_row.is_empty
    if transposed:
        k = k.transpose()
    top_x, top_y = k.ambient
    inner = k.within(_open_below(top_x, omega), StrataSet.full(top_y)).project_y()
    if inner.is_empty:
        column = k.section_y(omega)
        return Classification(_column_label(column, omega) or countable_label(k, bound), 3, omega, transposed, notes=["only the last column is populated"])
    if _cofinal(inner, omega):
        return Classification(ClassLabel(TRIANGLE), 3, omega, transposed, notes=["row heights are unbounded below Ω"])

    delta = inner.supremum()[0]
    u = k.within(StrataSet.full(top_x), _between(top_y, ZERO, delta))
    column = k.section_y(omega).intersect(StrataSet.above(top_y, delta))
    lower = bounded_plank_decomposition(u, delta, omega, bound)
    parts = {"U": lower.label}
    parts["V"] = _column_label(column, omega) or ClassLabel(COUNTABLE, ZERO)
    label = combine(parts["U"], parts["V"])
    notes = [f"row heights bounded by δ = {delta}"] + [f"U: {n}" for n in lower.notes]
    return Classification(label, 3, omega, transposed, parts, notes=notes)


def _column_label(column: StrataSet, omega: Ordinal) -> Optional[ClassLabel]:
    if not _cofinal(column, omega):
        return None
    return ClassLabel(ORDINAL_SPACE) if _copy_of_top(column, omega) else UNKNOWN_LABEL


# Invariants


def label_term(label: ClassLabel, omega: Ordinal) -> Optional[SpaceTerm]:
    if label.kind == ORDINAL_SPACE:
        return OrdSpace(omega)
    if label.kind == FULL_SQUARE:
        return KSpace(omega)
    if label.kind == PLANK:
        return Plank(omega, label.param)
    if label.kind == TRIANGLE:
        return Triangle(omega)
    if label.kind == COUNTABLE:
        return OrdSpace(label.param)
    return None


def measured_arms(k: Region, level: Ordinal, bound: Optional[int] = None) -> Optional[int]:
    """1 if the derived set at `level` lies in one row or column (besides its top point), else 2."""
    if not level.is_finite:
        return None
    chain = k.derivative_chain(max(level.to_int(), bound or 0) or None)
    if level.to_int() >= len(chain):
        return None
    derived = chain[level.to_int()]
    if derived.is_empty:
        return 0
    xs, ys = derived.project_x(), derived.project_y()
    if xs.order_type() == Ordinal.of(1) or ys.order_type() == Ordinal.of(1):
        return 1
    return 2


def _attach_invariants(result: Classification, k: Region, bound: Optional[int]):
    term = label_term(result.label, result.omega)
    measured_rank = k.cb_rank_finite(bound)
    result.measured["rank"] = str(measured_rank)
    degree = _top_degree(k, bound)
    result.measured["top degree"] = "unknown" if degree is None else str(degree)
    if term is None:
        return
    result.predicted["rank"] = str(rank(term))
    count = top_point_count(term)
    result.predicted["top degree"] = "unknown" if count is None else str(count)
    result.predicted["unitary"] = str(is_unitary(term))
    result.measured["unitary"] = "unknown" if degree is None else str(degree == 1)
    if result.label.kind in (TRIANGLE, FULL_SQUARE):
        level = separation_level(rank(OrdSpace(result.omega)))
        result.predicted["arms"] = "1" if result.label.kind == TRIANGLE else "2"
        arms = measured_arms(k, level, bound)
        result.measured["arms"] = "unknown" if arms is None else str(arms)
