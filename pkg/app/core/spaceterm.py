"""
Symbolic terms for scattered compact spaces built from ordinal intervals.

Each term carries a rank calculus (Cantor–Bendixson rank, unitarity, end point
and the shape of a designated derived set) and, where the space sits inside a
product of two ordinal intervals, an exact Region instantiation that the
derivative oracle can check.
"""

from dataclasses import dataclass
from typing import FrozenSet, Optional, Tuple

from loguru import logger

from app.core.ordinal import (
    ZERO,
    Ordinal,
    add,
    compare,
    is_indecomposable,
    ln,
    mul,
    natural_sum,
    omax,
    omega_pow,
    rank_of_ordinal_space,
    successor,
    to_str,
)
from app.core.region import Piece, Region
from app.core.strata import StrataSet, drop_last_unit, predecessor
from app.utils.error_handlers import SemanticError, UnsupportedTermError


class SpaceTerm:
    """Base class of the term algebra."""

    def __str__(self) -> str:  # pragma: no cover - every term overrides
        raise NotImplementedError


@dataclass(frozen=True)
class OrdSpace(SpaceTerm):
    gamma: Ordinal

    def __str__(self) -> str:
        return f"ord({self.gamma})"


@dataclass(frozen=True)
class Prod(SpaceTerm):
    left: SpaceTerm
    right: SpaceTerm

    def __str__(self) -> str:
        return f"prod({self.left}, {self.right})"


@dataclass(frozen=True)
class VecSum(SpaceTerm):
    """Vector sum of ρ summands taken cyclically from `bodies`."""

    rho: Ordinal
    bodies: Tuple[SpaceTerm, ...]

    def summands(self) -> Tuple[SpaceTerm, ...]:
        """Bodies that occur in the sum (all of them when ρ is infinite)."""
        if self.rho.is_finite:
            n = self.rho.to_int()
            return tuple(self.bodies[i % len(self.bodies)] for i in range(n))
        return self.bodies

    def __str__(self) -> str:
        return f"vecsum({self.rho}, " + ", ".join(str(b) for b in self.bodies) + ")"


@dataclass(frozen=True)
class DisjSum(SpaceTerm):
    left: SpaceTerm
    right: SpaceTerm

    def __str__(self) -> str:
        return f"disj({self.left}, {self.right})"


@dataclass(frozen=True)
class TSpace(SpaceTerm):
    """Two copies of [0,θ] glued at the top."""

    theta: Ordinal

    def __str__(self) -> str:
        return f"T({self.theta})"


@dataclass(frozen=True)
class KSpace(SpaceTerm):
    """[0,θ] × [0,θ]."""

    theta: Ordinal

    def __str__(self) -> str:
        return f"K({self.theta})"


@dataclass(frozen=True)
class Plank(SpaceTerm):
    alpha: Ordinal
    beta: Ordinal

    def __str__(self) -> str:
        return f"plank({self.alpha}, {self.beta})"


@dataclass(frozen=True)
class Triangle(SpaceTerm):
    """{(x, y) ∈ [0,α]² : x <= y}."""

    alpha: Ordinal

    def __str__(self) -> str:
        return f"tri({self.alpha})"


@dataclass(frozen=True)
class XC(SpaceTerm):
    """([0,Λ] × {ν}) ∪ ((C ∪ {Λ}) × [0,ν]) with Λ = sup C."""

    club: StrataSet
    nu: Ordinal

    @property
    def top(self) -> Ordinal:
        if self.club.is_empty:
            raise SemanticError("X(C) needs a nonempty club")
        sup, attained = self.club.supremum()
        if attained:
            raise SemanticError(f"club must be unbounded below its supremum {sup}", error_code="CLUB_BOUNDED")
        return sup

    def closed_club(self) -> StrataSet:
        lam = self.top
        return self.club.with_top(lam).union(StrataSet.points_of(lam, [lam]))

    def __str__(self) -> str:
        return f"XC({self.club}, {self.nu})"


# Shapes of derived sets


@dataclass(frozen=True)
class DerivedShape:
    """Shape of the derived set at `level`: a chain, a cross of two arms, k points, or unknown."""

    level: Optional[Ordinal]
    kind: str
    size: Optional[Ordinal] = None

    def __str__(self) -> str:
        if self.kind == "unknown":
            return "unknown"
        if self.kind == "cross":
            if self.size.is_successor:
                return f"T({predecessor(self.size)})"
            return f"cross({self.size})"
        return f"{self.kind}({self.size})"


UNKNOWN_SHAPE = DerivedShape(None, "unknown")


@dataclass(frozen=True)
class InvariantVector:
    """(rank, unitary, shape, summands); None marks an unknown slot."""

    rank: Optional[Ordinal]
    unitary: Optional[bool]
    shape: Optional[DerivedShape]
    summands: Optional[FrozenSet["InvariantVector"]] = None

    def differs(self, other: "InvariantVector") -> bool:
        """True when some slot known on both sides disagrees."""
        for mine, theirs in (
            (self.rank, other.rank),
            (self.unitary, other.unitary),
            (self._known_shape(), other._known_shape()),
            (self.summands, other.summands),
        ):
            if mine is not None and theirs is not None and mine != theirs:
                return True
        return False

    def _known_shape(self) -> Optional[DerivedShape]:
        return None if self.shape is None or self.shape.kind == "unknown" else self.shape

    def __str__(self) -> str:
        parts = [
            "?" if self.rank is None else to_str(self.rank),
            "?" if self.unitary is None else ("unitary" if self.unitary else "not unitary"),
            "?" if self.shape is None else str(self.shape),
        ]
        if self.summands is not None:
            parts.append("{" + "; ".join(sorted(str(v) for v in self.summands)) + "}")
        return "(" + ", ".join(parts) + ")"


# Helpers


def _top_count(gamma: Ordinal) -> int:
    """Number of points of maximal rank in [0, γ]."""
    return gamma.to_int() + 1 if gamma.is_finite else gamma.leading_coefficient


def _top_is_maximal(gamma: Ordinal) -> bool:
    """γ itself has maximal rank in [0, γ]."""
    return gamma.is_finite or len(gamma.terms) == 1


def _is_big_indecomposable(alpha: Ordinal) -> bool:
    return not alpha.is_finite and is_indecomposable(alpha)


def separation_level(rho: Ordinal) -> Ordinal:
    """(ζ ⊕ ζ) + ω^e where ρ = ζ + ω^e."""
    zeta, e = drop_last_unit(rho)
    return add(natural_sum(zeta, zeta), omega_pow(e))


def _arm_type(alpha: Ordinal) -> Ordinal:
    """Order type of ∂^ζ[0,α] where rk[0,α] = ζ + ω^e."""
    zeta, _ = drop_last_unit(rank_of_ordinal_space(alpha))
    return StrataSet.full(alpha).derivative_alpha(zeta).order_type()


# Rank calculus


def rank(t: SpaceTerm) -> Ordinal:
    if isinstance(t, OrdSpace):
        return rank_of_ordinal_space(t.gamma)
    if isinstance(t, Prod):
        return natural_sum(rank(t.left), rank(t.right))
    if isinstance(t, VecSum):
        return _vecsum_rank(t)
    if isinstance(t, DisjSum):
        return omax(rank(t.left), rank(t.right))
    if isinstance(t, TSpace):
        return rank_of_ordinal_space(t.theta)
    if isinstance(t, KSpace):
        r = rank_of_ordinal_space(t.theta)
        return natural_sum(r, r)
    if isinstance(t, Plank):
        return natural_sum(rank_of_ordinal_space(t.alpha), rank_of_ordinal_space(t.beta))
    if isinstance(t, Triangle):
        r = rank_of_ordinal_space(t.alpha)
        return natural_sum(r, r)
    if isinstance(t, XC):
        line, product = _xc_ranks(t)
        return omax(line, product)
    raise UnsupportedTermError(f"no rank rule for {t}", component="spaceterm")


def _check_vecsum(t: VecSum):
    if not t.bodies:
        raise SemanticError("vector sum needs at least one body")
    if t.rho.is_zero:
        raise UnsupportedTermError("vector sum of length 0", component="spaceterm")
    for body in t.bodies:
        if isinstance(body, OrdSpace) and body.gamma.is_zero:
            raise UnsupportedTermError("a one-point summand does not contribute to a vector sum", component="spaceterm")
    if not t.rho.is_finite and not is_indecomposable(t.rho):
        raise UnsupportedTermError(
            f"vector sum length {t.rho} is not indecomposable",
            component="spaceterm",
            details={"rho": str(t.rho)},
        )


def _vecsum_rank(t: VecSum) -> Ordinal:
    _check_vecsum(t)
    ranks = [rank(b) for b in t.summands()]
    if t.rho.is_finite:
        return omax(*ranks)
    if any(r != ranks[0] for r in ranks):
        raise UnsupportedTermError(
            "summands of an infinite vector sum must share one rank",
            component="spaceterm",
            details={"ranks": [str(r) for r in ranks]},
        )
    return add(ranks[0], ln(t.rho))


def _xc_ranks(t: XC) -> Tuple[Ordinal, Ordinal]:
    """(rank of the horizontal line, rank of the vertical box part)."""
    closed = t.closed_club()
    return rank_of_ordinal_space(t.top), natural_sum(closed.cb_rank(), rank_of_ordinal_space(t.nu))


def explain_rank(t: SpaceTerm) -> str:
    """The rule that produced rank(t), with its operands."""
    if isinstance(t, VecSum):
        if t.rho.is_finite:
            return "finite vector sum: max of summand ranks"
        return f"vector-sum rule: {rank(t.bodies[0])} + {ln(t.rho)}"
    if isinstance(t, (Prod, Plank, KSpace, Triangle)):
        a, b = _factor_ranks(t)
        return f"natural sum: {a} ⊕ {b}"
    if isinstance(t, DisjSum):
        return f"disjoint sum: max({rank(t.left)}, {rank(t.right)})"
    if isinstance(t, XC):
        line, product = _xc_ranks(t)
        return f"line/box union: max({line}, {product})"
    return "ordinal interval: leading exponent"


def _factor_ranks(t: SpaceTerm) -> Tuple[Ordinal, Ordinal]:
    if isinstance(t, Prod):
        return rank(t.left), rank(t.right)
    if isinstance(t, Plank):
        return rank_of_ordinal_space(t.alpha), rank_of_ordinal_space(t.beta)
    r = rank_of_ordinal_space(t.theta if isinstance(t, KSpace) else t.alpha)
    return r, r


def top_point_count(t: SpaceTerm) -> Optional[int]:
    """Number of points of rank rank(t); None when not derivable symbolically."""
    if isinstance(t, OrdSpace):
        return _top_count(t.gamma)
    if isinstance(t, Prod):
        a, b = top_point_count(t.left), top_point_count(t.right)
        return None if a is None or b is None else a * b
    if isinstance(t, VecSum):
        if t.rho.is_finite and len(t.summands()) > 1:
            return None
        return 1 if not t.rho.is_finite else top_point_count(t.bodies[0])
    if isinstance(t, DisjSum):
        r = rank(t)
        total = 0
        for part in (t.left, t.right):
            if rank(part) == r:
                count = top_point_count(part)
                if count is None:
                    return None
                total += count
        return total
    if isinstance(t, TSpace):
        c = _top_count(t.theta)
        return 2 * c - (1 if _top_is_maximal(t.theta) else 0)
    if isinstance(t, KSpace):
        return _top_count(t.theta) ** 2
    if isinstance(t, Plank):
        return _top_count(t.alpha) * _top_count(t.beta)
    if isinstance(t, Triangle):
        c = _top_count(t.alpha)
        return c * (c + 1) // 2
    if isinstance(t, XC):
        return _xc_top_points(t)
    return None


def _xc_top_points(t: XC) -> int:
    lam = t.top
    closed = t.closed_club()
    line, product = _xc_ranks(t)
    line_top = StrataSet.full(lam).derivative_alpha(line)
    club_top = closed.derivative_alpha(closed.cb_rank())
    nu_count = _top_count(t.nu)
    order = compare(line, product)
    if order > 0:
        return line_top.order_type().to_int()
    club_count = club_top.order_type().to_int()
    if order < 0:
        return club_count * nu_count
    shared = line_top.intersect(club_top).order_type().to_int()
    return line_top.order_type().to_int() + club_count * nu_count - shared


def is_unitary(t: SpaceTerm) -> Optional[bool]:
    count = top_point_count(t)
    return None if count is None else count == 1


def end_point(t: SpaceTerm) -> Optional[str]:
    """Symbolic description of the end point, or None when t is not (known to be) unitary."""
    if not is_unitary(t):
        return None
    if isinstance(t, OrdSpace):
        return _interval_end(t.gamma)
    if isinstance(t, Prod):
        return f"({end_point(t.left)}, {end_point(t.right)})"
    if isinstance(t, VecSum):
        return "1_Y" if not t.rho.is_finite else end_point(t.bodies[0])
    if isinstance(t, DisjSum):
        return end_point(t.left if rank(t.left) == rank(t) else t.right)
    if isinstance(t, TSpace):
        return f"glued top {t.theta}"
    if isinstance(t, KSpace):
        e = _interval_end(t.theta)
        return f"1_K = ({e}, {e})"
    if isinstance(t, Plank):
        return f"({_interval_end(t.alpha)}, {_interval_end(t.beta)})"
    if isinstance(t, Triangle):
        e = _interval_end(t.alpha)
        return f"({e}, {e})"
    if isinstance(t, XC):
        line, product = _xc_ranks(t)
        if compare(line, product) >= 0:
            return f"({_interval_end(t.top)}, {t.nu})"
        closed = t.closed_club()
        point = closed.derivative_alpha(closed.cb_rank()).minimum()
        return f"({point}, {_interval_end(t.nu)})"
    return None


def _interval_end(gamma: Ordinal) -> str:
    if gamma.is_finite:
        return "0" if gamma.is_zero else to_str(gamma)
    return to_str(omega_pow(gamma.leading_exponent))


def top_derivative_type(t: SpaceTerm) -> DerivedShape:
    """Shape of the derived set at the level that separates squares from triangles."""
    try:
        if isinstance(t, (KSpace, Plank)):
            alpha = t.theta if isinstance(t, KSpace) else t.alpha
            beta = t.theta if isinstance(t, KSpace) else t.beta
            if alpha == beta and _is_big_indecomposable(alpha):
                return DerivedShape(separation_level(rank_of_ordinal_space(alpha)), "cross", _arm_type(alpha))
        if isinstance(t, Triangle) and _is_big_indecomposable(t.alpha):
            return DerivedShape(separation_level(rank_of_ordinal_space(t.alpha)), "chain", _arm_type(t.alpha))
        if isinstance(t, Prod) and not all(isinstance(f, OrdSpace) for f in (t.left, t.right)):
            left, right = top_derivative_type(t.left), top_derivative_type(t.right)
            if left.kind != "points" or right.kind != "points":
                return UNKNOWN_SHAPE
        count = top_point_count(t)
        if count is None:
            return UNKNOWN_SHAPE
        return DerivedShape(rank(t), "points", Ordinal.of(count))
    except UnsupportedTermError as exc:
        logger.debug(f"shape of {t} unknown: {exc.message}")
        return UNKNOWN_SHAPE


def invariant_vector(t: SpaceTerm) -> InvariantVector:
    try:
        r: Optional[Ordinal] = rank(t)
    except UnsupportedTermError:
        return InvariantVector(None, None, None)
    summands = None
    if isinstance(t, VecSum):
        summands = frozenset(invariant_vector(b) for b in t.summands())
    return InvariantVector(r, is_unitary(t), top_derivative_type(t), summands)


# Instantiation


def _interval(gamma: Ordinal) -> StrataSet:
    return StrataSet.full(gamma)


def _fiber(gamma: Ordinal) -> Region:
    return Region.box(_interval(gamma), StrataSet.full(ZERO))


def _vecsum_chain_length(t: VecSum) -> Optional[Ordinal]:
    """γ with the vector sum equal to [0, γ] when every body is an ordinal interval."""
    if not all(isinstance(b, OrdSpace) for b in t.bodies):
        return None
    if t.rho.is_finite:
        total = ZERO
        for body in t.summands():
            total = add(total, body.gamma)
        return total
    cycle = ZERO
    for body in t.bodies:
        cycle = add(cycle, body.gamma)
    return mul(cycle, t.rho)


def instantiate(t: SpaceTerm) -> Region:
    if isinstance(t, OrdSpace):
        return _fiber(t.gamma)
    if isinstance(t, Prod):
        if isinstance(t.left, OrdSpace) and isinstance(t.right, OrdSpace):
            return Region.box(_interval(t.left.gamma), _interval(t.right.gamma))
        raise UnsupportedTermError(f"{t} has no realization in a product of two intervals", component="spaceterm")
    if isinstance(t, Plank):
        return Region.box(_interval(t.alpha), _interval(t.beta))
    if isinstance(t, KSpace):
        return Region.box(_interval(t.theta), _interval(t.theta))
    if isinstance(t, Triangle):
        return Region.tri(_interval(t.alpha), _interval(t.alpha))
    if isinstance(t, TSpace):
        theta = t.theta
        top = StrataSet.points_of(theta, [theta])
        return Region.build(
            (theta, theta),
            [Piece(_interval(theta), top), Piece(top, _interval(theta))],
        )
    if isinstance(t, VecSum):
        _check_vecsum(t)
        gamma = _vecsum_chain_length(t)
        if gamma is None:
            raise UnsupportedTermError(f"{t} has no realization in a product of two intervals", component="spaceterm")
        return _fiber(gamma)
    if isinstance(t, DisjSum):
        left, right = instantiate(t.left), instantiate(t.right)
        delta = successor(omax(*left.ambient))
        ambient = (add(delta, right.ambient[0]), add(delta, right.ambient[1]))
        return left.with_ambient(ambient).union(right.translate(delta, ambient))
    if isinstance(t, XC):
        from app.core.construct import build_XC

        return build_XC(t.club.with_top(t.top), t.top, t.nu)
    raise UnsupportedTermError(f"no instantiation rule for {t}", component="spaceterm")


def oracle_rank(t: SpaceTerm, bound: Optional[int] = None) -> Optional[Ordinal]:
    """Rank measured by iterating derivatives of the instantiated region; None if not reached."""
    return instantiate(t).cb_rank_finite(bound).value


__all__ = [
    "SpaceTerm",
    "OrdSpace",
    "Prod",
    "VecSum",
    "DisjSum",
    "TSpace",
    "KSpace",
    "Plank",
    "Triangle",
    "XC",
    "DerivedShape",
    "InvariantVector",
    "rank",
    "explain_rank",
    "is_unitary",
    "end_point",
    "top_derivative_type",
    "invariant_vector",
    "instantiate",
    "oracle_rank",
    "separation_level",
]
