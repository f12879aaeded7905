"""
Finite Birkhoff/Stone duality.

Posets and lattices are stored as numpy boolean order matrices over element
indices, with string labels for printing. Final segments are ordered by
reversed inclusion throughout: join is intersection, meet is union, the bottom
is the whole poset and the top is the empty segment.
"""

from dataclasses import dataclass
from functools import cached_property
import itertools
from typing import Callable, Dict, FrozenSet, Iterator, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from app.utils.error_handlers import SemanticError, SizeGuardError

MAX_ENUMERATED_ELEMENTS = 16
UNIVERSAL_MAX_SEGMENTS = 5
UNIVERSAL_MAX_ALGEBRA = 16


def _transitive_closure(lt: np.ndarray) -> np.ndarray:
    closed = lt.copy()
    for k in range(len(closed)):
        closed |= np.outer(closed[:, k], closed[k, :])
    return closed


def _frozen(matrix: np.ndarray) -> np.ndarray:
    matrix = np.array(matrix, dtype=bool)
    matrix.flags.writeable = False
    return matrix


class FinPoset:
    """A finite strict partial order on labeled elements 0..n-1."""

    def __init__(self, labels: Sequence[str], lt: np.ndarray):
        n = len(labels)
        lt = np.asarray(lt, dtype=bool)
        if lt.shape != (n, n):
            raise SemanticError(f"order matrix has shape {lt.shape}, expected {(n, n)}")
        if len(set(labels)) != n:
            raise SemanticError("poset labels must be distinct", details={"labels": list(labels)})
        if np.diag(lt).any():
            raise SemanticError("strict order must be irreflexive")
        if (lt & lt.T).any():
            raise SemanticError("order relation has a cycle")
        if ((lt.astype(np.int64) @ lt.astype(np.int64) > 0) & ~lt).any():
            raise SemanticError("order relation is not transitive")
        self.labels: Tuple[str, ...] = tuple(labels)
        self.lt = _frozen(lt)

    # Construction

    @classmethod
    def from_relations(cls, labels: Sequence[str], pairs: Sequence[Tuple[str, str]]) -> "FinPoset":
        """Cover or full relations; the transitive closure is taken."""
        index = {label: i for i, label in enumerate(labels)}
        lt = np.zeros((len(labels), len(labels)), dtype=bool)
        for a, b in pairs:
            if a not in index or b not in index:
                raise SemanticError(f"unknown element in relation {a} < {b}")
            lt[index[a], index[b]] = True
        closed = _transitive_closure(lt)
        if np.diag(closed).any():
            raise SemanticError("order relation has a cycle", details={"pairs": [list(p) for p in pairs]})
        return cls(labels, closed)

    @classmethod
    def chain(cls, n: int, prefix: str = "c") -> "FinPoset":
        return cls([f"{prefix}{i}" for i in range(n)], np.triu(np.ones((n, n), dtype=bool), k=1))

    @classmethod
    def antichain(cls, n: int, prefix: str = "a") -> "FinPoset":
        return cls([f"{prefix}{i}" for i in range(n)], np.zeros((n, n), dtype=bool))

    @classmethod
    def empty(cls) -> "FinPoset":
        return cls([], np.zeros((0, 0), dtype=bool))

    # Queries

    @property
    def n(self) -> int:
        return len(self.labels)

    @cached_property
    def leq(self) -> np.ndarray:
        return _frozen(self.lt | np.eye(self.n, dtype=bool))

    @cached_property
    def covers(self) -> np.ndarray:
        """covers[i, j] iff j covers i."""
        lt = self.lt.astype(np.int64)
        return _frozen(self.lt & ~(lt @ lt > 0))

    def cover_pairs(self) -> List[Tuple[str, str]]:
        return [(self.labels[i], self.labels[j]) for i, j in zip(*np.nonzero(self.covers))]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError as exc:
            raise SemanticError(f"unknown poset element {label}") from exc

    @cached_property
    def up_set_masks(self) -> np.ndarray:
        """Boolean matrix whose rows are all up-closed subsets."""
        n = self.n
        if n > MAX_ENUMERATED_ELEMENTS:
            raise SizeGuardError(f"cannot enumerate final segments of a {n}-element poset")
        codes = np.arange(2**n, dtype=np.int64)
        masks = ((codes[:, None] >> np.arange(n)) & 1).astype(bool)
        reached = masks.astype(np.int64) @ self.lt.astype(np.int64) > 0
        return _frozen(masks[~(reached & ~masks).any(axis=1)])

    def up_sets(self) -> List[FrozenSet[int]]:
        return [frozenset(np.nonzero(row)[0].tolist()) for row in self.up_set_masks]

    def down_sets(self) -> List[FrozenSet[int]]:
        everything = frozenset(range(self.n))
        return [everything - up for up in self.up_sets()]

    def is_monotone(self, f: Mapping[int, int], target: "FinPoset") -> bool:
        return all(target.leq[f[i], f[j]] for i, j in zip(*np.nonzero(self.lt)))

    def dual(self) -> "FinPoset":
        return FinPoset(self.labels, self.lt.T)

    def relabel(self, labels: Sequence[str]) -> "FinPoset":
        return FinPoset(labels, self.lt)

    def signature(self) -> List[Tuple[int, int]]:
        """Per-element (elements below, elements above): an isomorphism invariant."""
        below = self.lt.sum(axis=0)
        above = self.lt.sum(axis=1)
        return [(int(b), int(a)) for b, a in zip(below, above)]

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FinPoset) and self.labels == other.labels and np.array_equal(self.lt, other.lt)

    def __hash__(self) -> int:
        return hash((self.labels, self.lt.tobytes()))

    def __str__(self) -> str:
        lines = [f"poset {self.n}"]
        if self.labels:
            lines.append("labels " + " ".join(self.labels))
        lines.extend(f"{a} < {b}" for a, b in self.cover_pairs())
        return "\n".join(lines)

    def to_dict(self) -> Dict[str, object]:
        return {"labels": list(self.labels), "covers": [list(p) for p in self.cover_pairs()]}


def find_isomorphism(p: FinPoset, q: FinPoset) -> Optional[Dict[int, int]]:
    """Backtracking search for an order isomorphism p -> q, pruned by signatures."""
    if p.n != q.n or sorted(p.signature()) != sorted(q.signature()):
        return None
    sig_p, sig_q = p.signature(), q.signature()
    order = sorted(range(p.n), key=lambda i: sum(sig_p[i]), reverse=True)
    candidates = {i: [j for j in range(q.n) if sig_q[j] == sig_p[i]] for i in range(p.n)}
    mapping: Dict[int, int] = {}
    used = set()

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        i = order[k]
        for j in candidates[i]:
            if j in used:
                continue
            if all(p.lt[i, a] == q.lt[j, b] and p.lt[a, i] == q.lt[b, j] for a, b in mapping.items()):
                mapping[i] = j
                used.add(j)
                if extend(k + 1):
                    return True
                del mapping[i]
                used.discard(j)
        return False

    return dict(mapping) if extend(0) else None


def is_isomorphic(p: FinPoset, q: FinPoset) -> bool:
    return find_isomorphism(p, q) is not None


def _disjoint_labels(parts: Sequence[FinPoset], tags: Sequence[str]) -> List[List[str]]:
    flat = [label for part in parts for label in part.labels]
    if len(flat) == len(set(flat)):
        return [list(part.labels) for part in parts]
    return [[f"{tag}.{label}" for label in part.labels] for tag, part in zip(tags, parts)]


def disjoint_sum(p: FinPoset, q: FinPoset) -> FinPoset:
    """Incomparable union."""
    left, right = _disjoint_labels([p, q], ["0", "1"])
    lt = np.zeros((p.n + q.n, p.n + q.n), dtype=bool)
    lt[: p.n, : p.n] = p.lt
    lt[p.n :, p.n :] = q.lt
    return FinPoset(left + right, lt)


def lex_sum(index: FinPoset, parts: Sequence[FinPoset]) -> FinPoset:
    """Parts placed along the index order: (i, x) < (j, y) iff i < j, or i = j and x < y."""
    if len(parts) != index.n:
        raise SemanticError(f"lexicographic sum over {index.n} indices needs {index.n} parts, got {len(parts)}")
    labels = _disjoint_labels(parts, index.labels)
    offsets = np.cumsum([0] + [part.n for part in parts])
    total = int(offsets[-1])
    lt = np.zeros((total, total), dtype=bool)
    for i, part in enumerate(parts):
        lo, hi = offsets[i], offsets[i + 1]
        lt[lo:hi, lo:hi] = part.lt
        for j in range(index.n):
            if index.lt[i, j]:
                lt[lo:hi, offsets[j] : offsets[j + 1]] = True
    return FinPoset([label for group in labels for label in group], lt)


def count_antichains(p: FinPoset) -> int:
    """Antichains correspond to up-sets via their minimal elements."""
    return len(p.up_set_masks)


def enumerate_posets(n: int) -> Iterator[FinPoset]:
    """All labeled posets on elements p0..p(n-1), each exactly once, by one-point extension."""
    if n > 7:
        raise SizeGuardError(f"labeled enumeration is limited to 7 elements, got {n}")
    if n == 0:
        yield FinPoset.empty()
        return
    for base in enumerate_posets(n - 1):
        k = base.n
        ups = base.up_sets()
        downs = base.down_sets()
        for down in downs:
            for up in ups:
                if down & up:
                    continue
                if not all(base.lt[d, u] for d in down for u in up):
                    continue
                lt = np.zeros((k + 1, k + 1), dtype=bool)
                lt[:k, :k] = base.lt
                for d in down:
                    lt[d, k] = True
                for u in up:
                    lt[k, u] = True
                yield FinPoset([f"p{i}" for i in range(k + 1)], lt)


class FinDistLattice:
    """A finite distributive lattice given by its order; meet and join tables are derived."""

    def __init__(self, labels: Sequence[str], leq: np.ndarray, elements: Optional[Sequence[object]] = None):
        self.labels: Tuple[str, ...] = tuple(labels)
        self.leq = _frozen(leq)
        self.elements: Tuple[object, ...] = tuple(elements) if elements is not None else self.labels
        n = len(self.labels)
        if n == 0:
            raise SemanticError("a lattice has at least one element")
        self.join = self._bound_table(self.leq)
        self.meet = self._bound_table(self.leq.T)
        below = self.leq.sum(axis=0)
        self.bottom = int(np.argmin(below))
        self.top = int(np.argmax(below))
        error = self._distributive_error()
        if error is not None:
            raise SemanticError(error, error_code="NOT_DISTRIBUTIVE")

    def _bound_table(self, leq: np.ndarray) -> np.ndarray:
        """Least upper bounds with respect to leq; raises when one is missing."""
        n = len(self.labels)
        rows = {tuple(leq[i, :]): i for i in range(n)}
        table = np.zeros((n, n), dtype=np.int64)
        for i in range(n):
            for j in range(i, n):
                above = tuple(leq[i, :] & leq[j, :])
                if above not in rows:
                    raise SemanticError(
                        f"not a lattice: {self.labels[i]} and {self.labels[j]} have no least bound",
                        error_code="NOT_A_LATTICE",
                    )
                table[i, j] = table[j, i] = rows[above]
        table.flags.writeable = False
        return table

    def _distributive_error(self) -> Optional[str]:
        for i in range(len(self.labels)):
            diff = self.meet[i, self.join] != self.join[np.ix_(self.meet[i, :], self.meet[i, :])]
            if diff.any():
                j, k = (int(v) for v in next(zip(*np.nonzero(diff))))
                a, b, c = self.labels[i], self.labels[j], self.labels[k]
                return f"not distributive: {a} meet ({b} join {c}) differs from ({a} meet {b}) join ({a} meet {c})"
        return None

    @property
    def size(self) -> int:
        return len(self.labels)

    @cached_property
    def join_irreducibles(self) -> List[int]:
        """Elements with exactly one lower cover."""
        strict = self.leq & ~np.eye(self.size, dtype=bool)
        s = strict.astype(np.int64)
        covers = strict & ~(s @ s > 0)
        return [i for i in range(self.size) if covers[:, i].sum() == 1]

    def as_poset(self) -> FinPoset:
        return FinPoset(self.labels, self.leq & ~np.eye(self.size, dtype=bool))

    def table_text(self) -> str:
        width = max(len(label) for label in self.labels)
        header = " " * width + " | " + " ".join(label.rjust(width) for label in self.labels)
        blocks = []
        for name, table in (("join", self.join), ("meet", self.meet)):
            rows = [f"{name}", header, "-" * len(header)]
            for i, label in enumerate(self.labels):
                rows.append(label.rjust(width) + " | " + " ".join(self.labels[k].rjust(width) for k in table[i]))
            blocks.append("\n".join(rows))
        notes = f"0 = {self.labels[self.bottom]}, 1 = {self.labels[self.top]}"
        return "```\n" + "\n\n".join(blocks) + "\n```\n" + notes

    def to_dict(self) -> Dict[str, object]:
        return {
            "elements": list(self.labels),
            "bottom": self.labels[self.bottom],
            "top": self.labels[self.top],
            "join": [[self.labels[k] for k in row] for row in self.join],
            "meet": [[self.labels[k] for k in row] for row in self.meet],
        }


def lattices_isomorphic(l1: FinDistLattice, l2: FinDistLattice) -> bool:
    return is_isomorphic(l1.as_poset(), l2.as_poset())


def _segment_label(p: FinPoset, segment: FrozenSet[int]) -> str:
    return "{" + ",".join(p.labels[i] for i in sorted(segment)) + "}"


def final_segments(p: FinPoset) -> FinDistLattice:
    """Up-closed subsets of p under reversed inclusion."""
    masks = p.up_set_masks
    # F <= G iff F contains G
    leq = (masks[:, None, :] | ~masks[None, :, :]).all(axis=2)
    segments = p.up_sets()
    logger.debug(f"fs of a {p.n}-element poset has {len(segments)} elements")
    return FinDistLattice([_segment_label(p, s) for s in segments], leq, segments)


def prime_filters(lattice: FinDistLattice) -> FinPoset:
    """Prime filters ↑j for join-irreducible j, ordered by reversed inclusion (so ↑j <= ↑k iff j <= k)."""
    joins = lattice.join_irreducibles
    lt = np.array([[lattice.leq[j, k] and j != k for k in joins] for j in joins], dtype=bool).reshape(len(joins), len(joins))
    return FinPoset([f"up({lattice.labels[j]})" for j in joins], lt)


def product(l1: FinDistLattice, l2: FinDistLattice) -> FinDistLattice:
    labels = [f"({a},{b})" for a in l1.labels for b in l2.labels]
    leq = np.kron(l1.leq.astype(np.int64), l2.leq.astype(np.int64)).astype(bool)
    return FinDistLattice(labels, leq)


def glued_sum(l1: FinDistLattice, l2: FinDistLattice) -> FinDistLattice:
    """l1 below l2 with the top of l1 identified with the bottom of l2."""
    keep = [i for i in range(l1.size) if i != l1.top]
    n1, n2 = len(keep), l2.size
    leq = np.zeros((n1 + n2, n1 + n2), dtype=bool)
    leq[:n1, :n1] = l1.leq[np.ix_(keep, keep)]
    leq[:n1, n1:] = True
    leq[n1:, n1:] = l2.leq
    tags = ["0", "1"] if set(l1.labels) & set(l2.labels) else ["", ""]
    labels = [f"{tags[0]}.{l1.labels[i]}" if tags[0] else l1.labels[i] for i in keep]
    labels += [f"{tags[1]}.{label}" if tags[1] else label for label in l2.labels]
    return FinDistLattice(labels, leq)


def vector_sum(lattices: Sequence[FinDistLattice]) -> FinDistLattice:
    """Glued sum along a finite chain of lattices."""
    if not lattices:
        raise SemanticError("vector sum of no lattices")
    out = lattices[0]
    for lattice in lattices[1:]:
        out = glued_sum(out, lattice)
    return out


@dataclass(frozen=True)
class InducedEmbedding:
    mapping: Dict[int, int]
    is_embedding: bool


def induced_embedding(p: FinPoset, q: FinPoset, f: Mapping[int, int]) -> InducedEmbedding:
    """fs(q) -> fs(p) by preimage under a monotone surjection f: p -> q."""
    if sorted(set(f.values())) != list(range(q.n)) or sorted(f) != list(range(p.n)):
        raise SemanticError("induced embedding needs a total surjective map")
    if not p.is_monotone(f, q):
        raise SemanticError("induced embedding needs an order-preserving map")
    fs_p, fs_q = final_segments(p), final_segments(q)
    position = {segment: i for i, segment in enumerate(fs_p.elements)}
    mapping = {}
    for k, segment in enumerate(fs_q.elements):
        preimage = frozenset(i for i in range(p.n) if f[i] in segment)
        mapping[k] = position[preimage]
    image = np.array([mapping[k] for k in range(fs_q.size)])
    injective = len(set(mapping.values())) == fs_q.size
    preserves = bool(
        (fs_p.join[np.ix_(image, image)] == image[fs_q.join]).all()
        and (fs_p.meet[np.ix_(image, image)] == image[fs_q.meet]).all()
    )
    return InducedEmbedding(mapping, injective and preserves)


@dataclass(frozen=True)
class FinBooleanAlgebra:
    """The powerset algebra of `atoms` atoms; elements are bitmasks ordered by inclusion."""

    atoms: int

    @property
    def size(self) -> int:
        return 2**self.atoms

    @classmethod
    def of_size(cls, size: int) -> "FinBooleanAlgebra":
        if size < 1 or size & (size - 1):
            raise SemanticError(f"a finite Boolean algebra has 2^k elements, got {size}")
        return cls(size.bit_length() - 1)

    def leq(self, a: int, b: int) -> bool:
        return (a & ~b) == 0


@dataclass(frozen=True)
class FreeBooleanAlgebra:
    poset: FinPoset
    segments: Tuple[FrozenSet[int], ...]
    algebra: FinBooleanAlgebra
    embedding: Tuple[int, ...]

    @property
    def size(self) -> int:
        return self.algebra.size

    def is_order_embedding(self) -> bool:
        e = self.embedding
        injective = len(set(e)) == len(e)
        monotone = all(self.algebra.leq(e[i], e[j]) for i, j in zip(*np.nonzero(self.poset.lt)))
        return injective and monotone


def free_boolean_algebra(p: FinPoset) -> FreeBooleanAlgebra:
    """Powerset of fs(p) with i_P(x) = {F : x ∈ F} as a bitmask over the segments."""
    segments = tuple(p.up_sets())
    embedding = tuple(sum(1 << k for k, segment in enumerate(segments) if x in segment) for x in range(p.n))
    return FreeBooleanAlgebra(p, segments, FinBooleanAlgebra(len(segments)), embedding)


def monotone_maps(p: FinPoset, leq: Callable[[int, int], bool], values: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """All order-preserving maps p -> (values, leq), as tuples indexed by element."""
    order = sorted(range(p.n), key=lambda i: int(p.lt[:, i].sum()))
    chosen: Dict[int, int] = {}

    def extend(k: int) -> Iterator[Tuple[int, ...]]:
        if k == len(order):
            yield tuple(chosen[i] for i in range(p.n))
            return
        i = order[k]
        for v in values:
            if all(leq(chosen[j], v) for j in chosen if p.lt[j, i]):
                chosen[i] = v
                yield from extend(k + 1)
                del chosen[i]

    yield from extend(0)


def check_universal_property(p: FinPoset, b: FinBooleanAlgebra) -> bool:
    """Every monotone f: p -> b factors through i_P by exactly one homomorphism."""
    free = free_boolean_algebra(p)
    m = len(free.segments)
    if m > UNIVERSAL_MAX_SEGMENTS or b.size > UNIVERSAL_MAX_ALGEBRA:
        raise SizeGuardError(
            f"universal property check is limited to |fs(P)| <= {UNIVERSAL_MAX_SEGMENTS} and |B| <= {UNIVERSAL_MAX_ALGEBRA}",
            details={"segments": m, "algebra": b.size},
        )
    # homomorphisms 2^fs -> 2^k are h(X) = {atom : phi(atom) in X} for phi: atoms -> fs
    factorizations: Dict[Tuple[int, ...], int] = {}
    for phi in itertools.product(range(m), repeat=b.atoms):
        composite = tuple(
            sum(1 << atom for atom, seg in enumerate(phi) if (free.embedding[x] >> seg) & 1) for x in range(p.n)
        )
        factorizations[composite] = factorizations.get(composite, 0) + 1
    checked = 0
    for f in monotone_maps(p, b.leq, range(b.size)):
        checked += 1
        if factorizations.get(f, 0) != 1:
            logger.debug(f"map {f} has {factorizations.get(f, 0)} factorizations")
            return False
    logger.debug(f"universal property holds for {checked} monotone maps into a {b.size}-element algebra")
    return checked == len(factorizations)
