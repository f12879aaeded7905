"""
Exact subsets of a product [0, Λ1] × [0, Λ2] of two ordinal intervals.

A Region is a finite union of pieces ``Piece(xs, ys, rel)`` denoting
{(x, y) ∈ xs × ys : the order relation between x and y is in rel}, where rel is
a nonempty subset of {lt, eq, gt}. A box is rel = {lt, eq, gt}; a triangle is
rel = {lt, eq} (x <= y). Relation sets make the family closed under difference.

The derivative oracle is exact for every finite stage. Transfinite ranks are
reported as unknown together with the residue that was reached.
"""

from dataclasses import dataclass
from functools import cmp_to_key
from typing import Dict, FrozenSet, Iterable, List, Optional, Sequence, Set, Tuple

from loguru import logger

from app.core.ordinal import Ordinal, compare, omax, omin
from app.core.strata import StrataSet
from app.utils.error_handlers import AmbientMismatchError, SemanticError

LT, EQ, GT = "lt", "eq", "gt"
BOX: FrozenSet[str] = frozenset({LT, EQ, GT})
TRI: FrozenSet[str] = frozenset({LT, EQ})
GE: FrozenSet[str] = frozenset({GT, EQ})

RELATION_OPS: Dict[FrozenSet[str], str] = {
    BOX: "*",
    TRI: "<=",
    frozenset({LT}): "<",
    frozenset({EQ}): "=",
    frozenset({GT}): ">",
    GE: ">=",
    frozenset({LT, GT}): "!=",
}
OPS_RELATION: Dict[str, FrozenSet[str]] = {op: rel for rel, op in RELATION_OPS.items()}

Point = Tuple[Ordinal, Ordinal]


def relation_of(x: Ordinal, y: Ordinal) -> str:
    order = compare(x, y)
    return LT if order < 0 else (EQ if order == 0 else GT)


def _flip(rel: Iterable[str]) -> FrozenSet[str]:
    swap = {LT: GT, GT: LT, EQ: EQ}
    return frozenset(swap[r] for r in rel)


def meet_across(a: StrataSet, b: StrataSet) -> StrataSet:
    """a ∩ b for sets over different ambients, inside [0, min(tops)]."""
    if a.top == b.top:
        return a.intersect(b)
    top = omin(a.top, b.top)
    return a.with_top(top).intersect(b.with_top(top))


def _above(s: StrataSet, c: Ordinal) -> StrataSet:
    return s.intersect(StrataSet.above(s.top, c)) if compare(c, s.top) < 0 else StrataSet.empty(s.top)


def _below(s: StrataSet, c: Ordinal) -> StrataSet:
    return s.intersect(StrataSet.below(s.top, c))


@dataclass(frozen=True)
class Piece:
    xs: StrataSet
    ys: StrataSet
    rel: FrozenSet[str] = BOX

    @property
    def kind(self) -> str:
        if self.rel == BOX:
            return "box"
        if self.rel == TRI:
            return "tri"
        return "rel"

    def contains(self, p: Point) -> bool:
        x, y = p
        return relation_of(x, y) in self.rel and self.xs.contains(x) and self.ys.contains(y)

    @property
    def is_empty(self) -> bool:
        if not self.rel or self.xs.is_empty or self.ys.is_empty:
            return True
        if self.rel == BOX:
            return False
        low_x, low_y = self.xs.minimum(), self.ys.minimum()
        if LT in self.rel and not _above(self.ys, low_x).is_empty:
            return False
        if GT in self.rel and not _above(self.xs, low_y).is_empty:
            return False
        if EQ in self.rel and not meet_across(self.xs, self.ys).is_empty:
            return False
        return True

    def is_finite(self) -> bool:
        return self.xs.is_finite() and self.ys.is_finite()

    def points(self) -> List[Point]:
        return [(x, y) for x in self.xs.points() for y in self.ys.points() if relation_of(x, y) in self.rel]

    def transpose(self) -> "Piece":
        return Piece(self.ys, self.xs, _flip(self.rel))

    def covers(self, other: "Piece") -> bool:
        return other.rel <= self.rel and other.xs.issubset(self.xs) and other.ys.issubset(self.ys)

    def acc_pieces(self) -> List["Piece"]:
        """Accumulation points of the piece, as pieces."""
        s, t = self.xs, self.ys
        acc_s, acc_t = s.acc(), t.acc()
        cl_s, cl_t = s.union(acc_s), t.union(acc_t)
        if self.rel == BOX:
            return [Piece(acc_s, cl_t, BOX), Piece(cl_s, acc_t, BOX)]
        if self.rel == TRI:
            return [Piece(acc_s, cl_t, TRI), Piece(cl_s, acc_t, frozenset({LT}))]
        if self.rel == GE:
            return [Piece(cl_s, acc_t, GE), Piece(acc_s, cl_t, frozenset({GT}))]
        out: List[Piece] = []
        for r in self.rel:
            if r == EQ:
                diagonal = meet_across(s, t).acc()
            else:
                single = frozenset({r})
                out.append(Piece(acc_s, cl_t, single))
                out.append(Piece(cl_s, acc_t, single))
                diagonal = meet_across(acc_s, cl_t) if r == LT else meet_across(cl_s, acc_t)
            out.append(Piece(diagonal.with_top(s.top), diagonal.with_top(t.top), frozenset({EQ})))
        return out

    def section_x(self, y: Ordinal) -> StrataSet:
        """{x : (x, y) in the piece}."""
        if not self.ys.contains(y):
            return StrataSet.empty(self.xs.top)
        if self.rel == BOX:
            return self.xs
        out = StrataSet.empty(self.xs.top)
        if LT in self.rel:
            out = out.union(_below(self.xs, y))
        if EQ in self.rel and compare(y, self.xs.top) <= 0 and self.xs.contains(y):
            out = out.union(StrataSet.points_of(self.xs.top, [y]))
        if GT in self.rel:
            out = out.union(_above(self.xs, y))
        return out

    def section_y(self, x: Ordinal) -> StrataSet:
        return self.transpose().section_x(x)

    def project_x(self) -> StrataSet:
        s, t = self.xs, self.ys
        if self.is_empty:
            return StrataSet.empty(s.top)
        if self.rel == BOX:
            return s
        out = StrataSet.empty(s.top)
        if LT in self.rel:
            sup, _ = t.supremum()
            out = out.union(_below(s, sup))
        if EQ in self.rel:
            out = out.union(meet_across(s, t).with_top(s.top))
        if GT in self.rel:
            out = out.union(_above(s, t.minimum()))
        return out

    def project_y(self) -> StrataSet:
        return self.transpose().project_x()

    def __str__(self) -> str:
        if self.rel == BOX:
            return f"box {self.xs} x {self.ys}"
        if self.rel == TRI:
            return f"tri {self.xs} x {self.ys}"
        return f"rel {RELATION_OPS[self.rel]} {self.xs} x {self.ys}"


@dataclass(frozen=True)
class RankResult:
    """A rank, or unknown (value None) with the residue reached by iteration."""

    value: Optional[Ordinal]
    path: str
    residue: Optional["Region"] = None

    @property
    def known(self) -> bool:
        return self.value is not None

    def __str__(self) -> str:
        return "unknown" if self.value is None else str(self.value)


@dataclass(frozen=True)
class Region:
    ambient: Tuple[Ordinal, Ordinal]
    pieces: Tuple[Piece, ...] = ()

    # Construction

    @classmethod
    def build(cls, ambient: Tuple[Ordinal, Ordinal], pieces: Iterable[Piece]) -> "Region":
        top_x, top_y = ambient
        kept: List[Piece] = []
        for piece in pieces:
            if piece.xs.top != top_x or piece.ys.top != top_y:
                raise AmbientMismatchError((piece.xs.top, piece.ys.top), ambient)
            if piece.rel == frozenset({EQ}):
                diagonal = meet_across(piece.xs, piece.ys)
                piece = Piece(diagonal.with_top(top_x), diagonal.with_top(top_y), piece.rel)
            if not piece.is_empty and piece not in kept:
                kept.append(piece)
        kept = _merge_pieces(kept)
        kept.sort(key=str)
        return cls(ambient, tuple(kept))

    @classmethod
    def empty(cls, ambient: Tuple[Ordinal, Ordinal]) -> "Region":
        return cls(ambient, ())

    @classmethod
    def box(cls, xs: StrataSet, ys: StrataSet) -> "Region":
        return cls.build((xs.top, ys.top), [Piece(xs, ys, BOX)])

    @classmethod
    def tri(cls, xs: StrataSet, ys: StrataSet) -> "Region":
        return cls.build((xs.top, ys.top), [Piece(xs, ys, TRI)])

    @classmethod
    def full(cls, ambient: Tuple[Ordinal, Ordinal]) -> "Region":
        return cls.box(StrataSet.full(ambient[0]), StrataSet.full(ambient[1]))

    @classmethod
    def points_of(cls, ambient: Tuple[Ordinal, Ordinal], points: Iterable[Point]) -> "Region":
        rows: Dict[Ordinal, List[Ordinal]] = {}
        for x, y in points:
            rows.setdefault(y, []).append(x)
        return cls.build(
            ambient,
            [
                Piece(StrataSet.points_of(ambient[0], xs), StrataSet.points_of(ambient[1], [y]), BOX)
                for y, xs in rows.items()
            ],
        )

    # Queries

    @property
    def is_empty(self) -> bool:
        return not self.pieces

    def contains(self, p: Point) -> bool:
        return any(piece.contains(p) for piece in self.pieces)

    def __contains__(self, p: Point) -> bool:
        return self.contains(p)

    def _check(self, other: "Region"):
        if self.ambient != other.ambient:
            raise AmbientMismatchError(self.ambient, other.ambient)

    def is_finite(self) -> bool:
        return all(piece.is_finite() for piece in self.pieces)

    def points(self) -> List[Point]:
        found: Set[Point] = set()
        for piece in self.pieces:
            found.update(piece.points())
        return sorted(found, key=cmp_to_key(_point_order))

    # Boolean algebra

    def union(self, other: "Region") -> "Region":
        self._check(other)
        return Region.build(self.ambient, self.pieces + other.pieces)

    def intersect(self, other: "Region") -> "Region":
        self._check(other)
        out: List[Piece] = []
        for p in self.pieces:
            for q in other.pieces:
                rel = p.rel & q.rel
                if rel:
                    out.append(Piece(p.xs.intersect(q.xs), p.ys.intersect(q.ys), rel))
        return Region.build(self.ambient, out)

    def difference(self, other: "Region") -> "Region":
        self._check(other)
        current = list(self.pieces)
        for q in other.pieces:
            nxt: List[Piece] = []
            for p in current:
                nxt.extend(_subtract_piece(p, q))
            current = [p for p in nxt if not p.is_empty]
            if not current:
                break
        return Region.build(self.ambient, current)

    def issubset(self, other: "Region") -> bool:
        return self.difference(other).is_empty

    def same_as(self, other: "Region") -> bool:
        """Extensional equality via mutual difference."""
        return self.issubset(other) and other.issubset(self)

    def within(self, xs: StrataSet, ys: StrataSet) -> "Region":
        """Intersection with the box xs × ys."""
        return self.intersect(Region.box(xs, ys))

    # Topology

    def acc(self) -> "Region":
        out: List[Piece] = []
        for piece in self.pieces:
            out.extend(piece.acc_pieces())
        return Region.build(self.ambient, out)

    def closure(self) -> "Region":
        return self.union(self.acc())

    def is_closed(self) -> bool:
        return self.acc().issubset(self)

    def derivative(self) -> "Region":
        return self.intersect(self.acc())

    def isolated_points(self) -> "Region":
        return self.difference(self.derivative())

    def derivative_chain(self, bound: Optional[int] = None) -> List["Region"]:
        from app.utils.cache_manager import derivative_cache

        return derivative_cache.chain(("region", self), self, lambda r: r.derivative(), bound or _bound())

    def derivative_n(self, n: int, bound: Optional[int] = None) -> "Region":
        chain = self.derivative_chain(max(n, bound or _bound()))
        if n < len(chain):
            return chain[n]
        return chain[-1]

    def cb_rank_finite(self, bound: Optional[int] = None) -> RankResult:
        if self.is_empty:
            raise SemanticError("cb_rank of the empty region is undefined")
        bound = bound or _bound()
        chain = self.derivative_chain(bound)
        if chain[-1].is_empty:
            return RankResult(Ordinal.of(len(chain) - 2), "iteration")
        logger.debug(f"region rank not reached within {bound} derivatives")
        return RankResult(None, "unknown", chain[-1])

    def point_rank(self, p: Point, bound: Optional[int] = None) -> RankResult:
        if not self.contains(p):
            raise SemanticError(f"({p[0]}, {p[1]}) is not in the region")
        bound = bound or _bound()
        chain = self.derivative_chain(bound)
        for n in range(1, len(chain)):
            if not chain[n].contains(p):
                return RankResult(Ordinal.of(n - 1), "iteration")
        fiber = self._fiber_rank(p)
        if fiber is not None:
            return RankResult(fiber, "fiber")
        logger.warning(f"point rank of ({p[0]}, {p[1]}) is undecided within {bound} derivatives")
        return RankResult(None, "unknown", chain[-1])

    def _fiber_rank(self, p: Point) -> Optional[Ordinal]:
        """Max of 1-D ranks over the closed pieces at p, each locally a line through p."""
        x, y = p
        best: Optional[Ordinal] = None
        for piece in self.pieces:
            single = Region.build(self.ambient, [piece])
            if not single.is_closed():
                return None
            if not piece.contains(p):
                continue
            if not piece.ys.acc().contains(y):
                rank = piece.section_x(y).point_rank(x)
            elif not piece.xs.acc().contains(x):
                rank = piece.section_y(x).point_rank(y)
            else:
                return None
            best = rank if best is None else omax(best, rank)
        return best

    # Lattice structure

    def is_sublattice(self) -> bool:
        """Closure under coordinatewise min and max."""
        if self.is_empty:
            return True
        if self.is_finite():
            pts = self.points()
            members = set(pts)
            for i, p in enumerate(pts):
                for q in pts[i + 1:]:
                    if _meet(p, q) not in members or _join(p, q) not in members:
                        return False
            return True
        return _interleaving_check(self)

    # Sections and projections

    def section_x(self, y: Ordinal) -> StrataSet:
        out = StrataSet.empty(self.ambient[0])
        for piece in self.pieces:
            out = out.union(piece.section_x(y))
        return out

    def section_y(self, x: Ordinal) -> StrataSet:
        out = StrataSet.empty(self.ambient[1])
        for piece in self.pieces:
            out = out.union(piece.section_y(x))
        return out

    def project_x(self) -> StrataSet:
        out = StrataSet.empty(self.ambient[0])
        for piece in self.pieces:
            out = out.union(piece.project_x())
        return out

    def project_y(self) -> StrataSet:
        out = StrataSet.empty(self.ambient[1])
        for piece in self.pieces:
            out = out.union(piece.project_y())
        return out

    def transpose(self) -> "Region":
        return Region.build((self.ambient[1], self.ambient[0]), [p.transpose() for p in self.pieces])

    def with_ambient(self, ambient: Tuple[Ordinal, Ordinal]) -> "Region":
        return Region.build(ambient, [Piece(p.xs.with_top(ambient[0]), p.ys.with_top(ambient[1]), p.rel) for p in self.pieces])

    def translate(self, delta: Ordinal, ambient: Tuple[Ordinal, Ordinal]) -> "Region":
        """{(delta + x, delta + y)}; the relation between coordinates is preserved."""
        return Region.build(
            ambient,
            [Piece(p.xs.translate(delta, ambient[0]), p.ys.translate(delta, ambient[1]), p.rel) for p in self.pieces],
        )

    def __str__(self) -> str:
        lines = [f"ambient {self.ambient[0]} {self.ambient[1]}"]
        lines.extend(str(piece) for piece in self.pieces)
        return "\n".join(lines)


def _bound() -> int:
    from app.config import config

    return config.derivative_bound


def _point_order(p: Point, q: Point) -> int:
    return compare(p[0], q[0]) or compare(p[1], q[1])


def _meet(p: Point, q: Point) -> Point:
    return omin(p[0], q[0]), omin(p[1], q[1])


def _join(p: Point, q: Point) -> Point:
    return omax(p[0], q[0]), omax(p[1], q[1])


def _subtract_piece(p: Piece, q: Piece) -> List[Piece]:
    common_x = p.xs.intersect(q.xs)
    if common_x.is_empty:
        return [p]
    common_y = p.ys.intersect(q.ys)
    if common_y.is_empty or not (p.rel & q.rel):
        return [p]
    out = [Piece(p.xs.difference(q.xs), p.ys, p.rel), Piece(common_x, p.ys.difference(q.ys), p.rel)]
    rest = p.rel - q.rel
    if rest:
        out.append(Piece(common_x, common_y, frozenset(rest)))
    return out


def _merge_pieces(pieces: List[Piece]) -> List[Piece]:
    """Fuse pieces sharing a side and relation, then drop covered pieces."""
    changed = True
    while changed:
        changed = False
        for axis in ("ys", "xs"):
            groups: Dict[Tuple[StrataSet, FrozenSet[str]], List[Piece]] = {}
            order: List[Tuple[StrataSet, FrozenSet[str]]] = []
            for piece in pieces:
                key = (getattr(piece, axis), piece.rel)
                if key not in groups:
                    groups[key] = []
                    order.append(key)
                groups[key].append(piece)
            fused: List[Piece] = []
            for key in order:
                group = groups[key]
                if len(group) == 1:
                    fused.append(group[0])
                    continue
                changed = True
                other = "xs" if axis == "ys" else "ys"
                merged = getattr(group[0], other)
                for piece in group[1:]:
                    merged = merged.union(getattr(piece, other))
                if axis == "ys":
                    fused.append(Piece(merged, key[0], key[1]))
                else:
                    fused.append(Piece(key[0], merged, key[1]))
            pieces = fused
    kept: List[Piece] = []
    for i, piece in enumerate(pieces):
        if any(j != i and other.covers(piece) and (j < i or not piece.covers(other)) for j, other in enumerate(pieces)):
            continue
        kept.append(piece)
    return kept


# Sublattice check for infinite regions


def _ordered_partitions(items: Sequence[str]) -> List[List[Tuple[str, ...]]]:
    """All weak orders of items as lists of tie blocks, lowest first."""
    if not items:
        return [[]]
    out: List[List[Tuple[str, ...]]] = []
    first, rest = items[0], items[1:]
    for tail in _ordered_partitions(rest):
        for i in range(len(tail) + 1):
            out.append(tail[:i] + [(first,)] + tail[i:])
        for i in range(len(tail)):
            out.append(tail[:i] + [tail[i] + (first,)] + tail[i + 1:])
    return out


_WEAK_ORDERS = _ordered_partitions(["x1", "x2", "y1", "y2"])


def _cells(sides: Sequence[StrataSet], top: Ordinal) -> List[StrataSet]:
    cells = [StrataSet.full(top)]
    seen: List[StrataSet] = []
    for side in sides:
        if side in seen:
            continue
        seen.append(side)
        refined: List[StrataSet] = []
        for cell in cells:
            for part in (cell.intersect(side), cell.difference(side)):
                if not part.is_empty:
                    refined.append(part)
        cells = refined
    return cells


def _realizable(blocks: List[List[StrataSet]], top: Ordinal) -> bool:
    """Is there a strictly increasing choice of one point per block, each in all of its sets?"""
    previous: Optional[Ordinal] = None
    for sets in blocks:
        candidates = StrataSet.full(top)
        for s in sets:
            candidates = candidates.intersect(s.with_top(top))
        if previous is not None:
            candidates = _above(candidates, previous)
        if candidates.is_empty:
            return False
        previous = candidates.minimum()
    return True


def _interleaving_check(region: Region) -> bool:
    top_x, top_y = region.ambient
    x_cells = _cells([p.xs for p in region.pieces], top_x)
    y_cells = _cells([p.ys for p in region.pieces], top_y)
    x_in = [[not cell.intersect(p.xs).is_empty for cell in x_cells] for p in region.pieces]
    y_in = [[not cell.intersect(p.ys).is_empty for cell in y_cells] for p in region.pieces]
    common = omax(top_x, top_y)

    def member(a: int, c: int, r: str) -> bool:
        return any(x_in[i][a] and y_in[i][c] and r in p.rel for i, p in enumerate(region.pieces))

    types = [
        (a, c, r)
        for a in range(len(x_cells))
        for c in range(len(y_cells))
        for r in (LT, EQ, GT)
        if member(a, c, r)
    ]
    logger.debug(f"sublattice check over {len(x_cells)}x{len(y_cells)} cells, {len(types)} point types")

    for a, c, r1 in types:
        for b, d, r2 in types:
            cells = {"x1": x_cells[a], "x2": x_cells[b], "y1": y_cells[c], "y2": y_cells[d]}
            index = {"x1": a, "x2": b, "y1": c, "y2": d}
            for blocks in _WEAK_ORDERS:
                pos = {name: k for k, block in enumerate(blocks) for name in block}
                if pos["x1"] > pos["x2"]:
                    continue
                if _rel_from(pos["x1"], pos["y1"]) != r1 or _rel_from(pos["x2"], pos["y2"]) != r2:
                    continue
                low_y = "y1" if pos["y1"] <= pos["y2"] else "y2"
                high_y = "y2" if low_y == "y1" else "y1"
                meet_ok = member(index["x1"], index[low_y], _rel_from(pos["x1"], pos[low_y]))
                join_ok = member(index["x2"], index[high_y], _rel_from(pos["x2"], pos[high_y]))
                if meet_ok and join_ok:
                    continue
                if _realizable([[cells[name] for name in block] for block in blocks], common):
                    logger.debug(f"lattice violation for cells x{a},x{b},y{c},y{d} in order {blocks}")
                    return False
    return True


def _rel_from(i: int, j: int) -> str:
    return LT if i < j else (EQ if i == j else GT)


# Module-level operations


def union(r: Region, s: Region) -> Region:
    return r.union(s)


def intersect(r: Region, s: Region) -> Region:
    return r.intersect(s)


def difference(r: Region, s: Region) -> Region:
    return r.difference(s)


def derivative(r: Region) -> Region:
    return r.derivative()


def cb_rank_finite(r: Region, bound: Optional[int] = None) -> RankResult:
    return r.cb_rank_finite(bound)


def point_rank(r: Region, p: Point, bound: Optional[int] = None) -> RankResult:
    return r.point_rank(p, bound)


def lattice_closure(points: Iterable[Point], ambient: Optional[Tuple[Ordinal, Ordinal]] = None) -> Region:
    """The smallest meet/join-closed finite set containing the points."""
    closed: Set[Point] = set(points)
    frontier = list(closed)
    while frontier:
        fresh: List[Point] = []
        snapshot = list(closed)
        for p in frontier:
            for q in snapshot:
                for r in (_meet(p, q), _join(p, q)):
                    if r not in closed:
                        closed.add(r)
                        fresh.append(r)
        frontier = fresh
    if ambient is None:
        if not closed:
            raise SemanticError("lattice closure of no points needs an explicit ambient")
        ambient = (omax(*[p[0] for p in closed]), omax(*[p[1] for p in closed]))
    return Region.points_of(ambient, closed)


def is_sublattice(r: Region) -> bool:
    return r.is_sublattice()
