"""
Club constructions and the rank-spectrum separator.

A ClubSpec describes an increasing sequence of partial sums of indecomposable
generators over the index ω·k. The closure of the partial sums is a club in
Λ = ω^(m+1)·k (ω^m the largest generator). X(C) glues a horizontal line over
[0,Λ] to vertical fibers over the club, and the ranks of its points above the
isolated club points form the spectrum that tells different generator sets
apart.
"""

from dataclasses import dataclass
from functools import cmp_to_key
from typing import List, Optional, Sequence, Tuple

from loguru import logger

from app.core.ordinal import (
    OMEGA,
    ZERO,
    Ordinal,
    add,
    compare,
    is_indecomposable,
    last_exponent,
    left_subtract,
    ln,
    mul,
    omax,
    omega_pow,
    successor,
)
from app.core.region import Piece, RankResult, Region
from app.core.spaceterm import SpaceTerm, VecSum, rank
from app.core.strata import Periodic, Strata, StrataSet
from app.utils.error_handlers import SemanticError

_ORDER = cmp_to_key(compare)


@dataclass(frozen=True)
class ClubSpec:
    """Generators A, index ω·blocks and a cyclic schedule of generator positions."""

    generators: Tuple[Ordinal, ...]
    blocks: Optional[int] = None
    schedule: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        a = self.generators
        if len(a) < 2:
            raise SemanticError(f"a club spec needs at least two generators, got {len(a)}", error_code="INVALID_SCHEDULE")
        if len(set(a)) != len(a):
            raise SemanticError("generators must be distinct", error_code="INVALID_SCHEDULE")
        for gamma in a:
            if gamma.is_zero or not is_indecomposable(gamma):
                raise SemanticError(f"generator {gamma} is not indecomposable", error_code="INVALID_SCHEDULE")
            if ln(gamma).is_zero:
                raise SemanticError(
                    f"generator {gamma} has ln 0, which collides with the ranks of edge points",
                    error_code="INVALID_SCHEDULE",
                )
        if self.blocks is None:
            object.__setattr__(self, "blocks", len(a))
        if self.blocks < 1:
            raise SemanticError("the index ω·k needs k >= 1", error_code="INVALID_SCHEDULE")
        if self.schedule is None:
            object.__setattr__(self, "schedule", tuple(range(len(a))))
        if any(i < 0 or i >= len(a) for i in self.schedule):
            raise SemanticError(f"schedule {list(self.schedule)} refers to a missing generator", error_code="INVALID_SCHEDULE")
        if set(self.schedule) != set(range(len(a))):
            raise SemanticError("schedule must visit every generator", error_code="INVALID_SCHEDULE")

    @classmethod
    def with_index(cls, generators: Sequence[Ordinal], index: Optional[Ordinal] = None, schedule: Optional[Sequence[int]] = None) -> "ClubSpec":
        blocks = None
        if index is not None:
            terms = index.terms
            if index.is_zero or len(terms) != 1 or terms[0][0] != Ordinal.of(1):
                raise SemanticError(f"index must be of the form w*k, got {index}", error_code="INVALID_SCHEDULE")
            blocks = terms[0][1]
        return cls(tuple(generators), blocks, tuple(schedule) if schedule is not None else None)

    @property
    def index(self) -> Ordinal:
        return mul(OMEGA, Ordinal.of(self.blocks))

    @property
    def word(self) -> Tuple[Ordinal, ...]:
        return tuple(self.generators[i] for i in self.schedule)

    @property
    def max_exponent(self) -> Ordinal:
        return omax(*(ln(g) for g in self.generators))

    @property
    def top(self) -> Ordinal:
        """Λ = ω^(m+1)·k."""
        return mul(omega_pow(successor(self.max_exponent)), Ordinal.of(self.blocks))

    def __str__(self) -> str:
        gens = ",".join(str(g) for g in self.generators)
        return f"club(A={{{gens}}}, index={self.index}, schedule={list(self.schedule)})"


def partial_sums(spec: ClubSpec, n: int) -> List[Ordinal]:
    """λ_1, ..., λ_n by folding ordinal addition over the schedule."""
    word = spec.word
    out: List[Ordinal] = []
    total = ZERO
    for i in range(n):
        total = add(total, word[i % len(word)])
        out.append(total)
    return out


def club_of_partial_sums(spec: ClubSpec) -> StrataSet:
    """Closure of the nonzero partial sums below the index, as a set inside [0, Λ]."""
    word = spec.word
    m = spec.max_exponent
    big = omega_pow(m)
    first_max = next(i for i, g in enumerate(word) if g == big)
    count = sum(1 for g in word if g == big)
    step = mul(big, Ordinal.of(count))
    rotated = word[first_max + 1 :] + word[: first_max + 1]

    prefix: List[Ordinal] = []
    total = ZERO
    for g in word[:first_max]:
        total = add(total, g)
        prefix.append(total)

    cycle: List[Ordinal] = []
    total = big
    for g in (ZERO,) + rotated[:-1]:
        total = add(total, g)
        cycle.append(total)

    pattern_points = [g if compare(g, step) < 0 else left_subtract(step, g) for g in cycle]
    early = [g for g in cycle if compare(g, step) < 0]
    pattern = StrataSet.points_of(step, pattern_points)
    block = omega_pow(successor(m))

    lam = spec.top
    atoms = []
    for j in range(spec.blocks):
        base = mul(block, Ordinal.of(j))
        if j >= 1:
            atoms.append(Strata(base, base))
        for x in prefix + early:
            atoms.append(Strata(add(base, x), add(base, x)))
        atoms.append(Periodic(base, m, count, 1, pattern))
    club = StrataSet.build(lam, atoms)
    logger.debug(f"club for {spec}: {len(club.atoms)} atoms below {lam}")
    return club


def build_XC(club: StrataSet, lam: Ordinal, nu: Ordinal) -> Region:
    """([0,Λ] × {ν}) ∪ ((club ∪ {Λ}) × [0,ν])."""
    if club.is_empty:
        raise SemanticError("X(C) needs a nonempty club", error_code="CLUB_EMPTY")
    if club.top != lam:
        if compare(club.top, lam) > 0 and not club.intersect(StrataSet.interval(club.top, lam, club.top)).is_empty:
            raise SemanticError(f"club reaches {lam} or beyond", error_code="CLUB_RANGE")
        club = club.with_top(lam)
    if club.contains(lam):
        raise SemanticError(f"club must lie below {lam}", error_code="CLUB_RANGE")
    acc = club.acc()
    if not acc.contains(lam):
        raise SemanticError(f"club is bounded below {lam}", error_code="CLUB_BOUNDED")
    if not acc.difference(StrataSet.points_of(lam, [lam])).issubset(club):
        raise SemanticError("club is not closed below its supremum", error_code="CLUB_NOT_CLOSED")
    if not nu.is_limit:
        raise SemanticError(f"ν must be a limit ordinal, got {nu}", error_code="NU_NOT_LIMIT")
    line = StrataSet.full(lam)
    fiber = StrataSet.full(nu)
    closed = club.union(StrataSet.points_of(lam, [lam]))
    return Region.build(
        (lam, nu),
        [Piece(line, StrataSet.points_of(nu, [nu])), Piece(closed, fiber)],
    )


@dataclass(frozen=True)
class SpectrumReport:
    club: StrataSet
    top: Ordinal
    nu: Ordinal
    points: Tuple[Ordinal, ...]
    predicted: Tuple[Ordinal, ...]
    measured: Tuple[RankResult, ...]

    @property
    def spectrum(self) -> Tuple[Ordinal, ...]:
        """Measured ranks when all are known, otherwise the predicted ones."""
        if all(r.known for r in self.measured):
            return _sorted_unique(r.value for r in self.measured)
        return _sorted_unique(self.predicted)

    @property
    def agreement(self) -> bool:
        return all(r.known for r in self.measured) and _sorted_unique(self.predicted) == self.spectrum

    def text(self) -> str:
        return "{" + ",".join(str(v) for v in self.spectrum) + "}"


def _sorted_unique(values) -> Tuple[Ordinal, ...]:
    out: List[Ordinal] = []
    for v in values:
        if v not in out:
            out.append(v)
    return tuple(sorted(out, key=_ORDER))


def rank_spectrum(x: Region, club: StrataSet, nu: Optional[Ordinal] = None) -> SpectrumReport:
    """Ranks in x of the points (c, ν) over isolated club points c, one representative per level."""
    lam, top_nu = x.ambient
    nu = nu or top_nu
    club = club.with_top(lam)
    levels = club.isolated_points().attained_levels()
    nu_rank = last_exponent(nu)
    points, predicted, measured = [], [], []
    for level in sorted(levels, key=_ORDER):
        c = levels[level]
        points.append(c)
        predicted.append(omax(level, nu_rank))
        measured.append(x.point_rank((c, nu)))
    report = SpectrumReport(club, lam, nu, tuple(points), tuple(predicted), tuple(measured))
    logger.debug(f"spectrum over {len(points)} isolated levels: {report.text()}")
    return report


@dataclass(frozen=True)
class Separation:
    separated: bool
    left: SpectrumReport
    right: SpectrumReport

    def text(self) -> str:
        verdict = "separated" if self.separated else "not separated"
        return f"{verdict}: spectra {self.left.text()} vs {self.right.text()}"


def spectrum_of(spec: ClubSpec, nu: Ordinal = OMEGA) -> SpectrumReport:
    club = club_of_partial_sums(spec)
    return rank_spectrum(build_XC(club, spec.top, nu), club, nu)


def separate(a: ClubSpec, b: ClubSpec, nu: Ordinal = OMEGA) -> Separation:
    left, right = spectrum_of(a, nu), spectrum_of(b, nu)
    return Separation(left.spectrum != right.spectrum, left, right)


def plank_witness(x: Region) -> Optional[Piece]:
    """A box piece with two infinite sides, if any."""
    for piece in x.pieces:
        if piece.kind == "box" and not piece.xs.is_finite() and not piece.ys.is_finite():
            return piece
    return None


def family_generator(ys: Sequence[SpaceTerm], subsets: Sequence[Sequence[int]], kappa: Ordinal = OMEGA) -> List[VecSum]:
    """For each index set, the vector sum of length κ cycling through the chosen terms."""
    for subset in subsets:
        if len(set(subset)) < 2:
            raise SemanticError(
                f"index set {sorted(set(subset))} has fewer than two elements",
                error_code="SUBSET_TOO_SMALL",
            )
        if any(i < 0 or i >= len(ys) for i in subset):
            raise SemanticError(f"index set {list(subset)} refers to a missing term")
    if kappa.is_zero or kappa.is_finite or not is_indecomposable(kappa):
        raise SemanticError(f"repeat length {kappa} must be an infinite indecomposable ordinal")
    ranks = [rank(y) for y in ys]
    if any(r != ranks[0] for r in ranks):
        raise SemanticError(
            "family members must share one rank",
            error_code="RANK_MISMATCH",
            details={"ranks": [str(r) for r in ranks]},
        )
    return [VecSum(kappa, tuple(ys[i] for i in sorted(set(subset)))) for subset in subsets]
