"""
Exact subsets of an ordinal interval [0, top].

A StrataSet is a finite union of atoms:

- ``Strata(a, b, lo, hi)`` = {ξ ∈ [a, b] : ξ > 0, lo <= le(ξ) < hi}, where le is the
  last CNF exponent; the point 0 is a separate atom (``zero=True``).
- ``Periodic(base, m, p, start, G)`` = {base + ω^m·p·t + σ : t >= start, σ ∈ G} with G
  a StrataSet inside [0, ω^m·p). Its points are cofinal in base + ω^(m+1), which is
  never attained.

In the order topology a point accumulates only from below, so the accumulation
points of a level band are the points above its minimum whose level exceeds the
band's lower level.
"""

from dataclasses import dataclass, replace
from functools import cmp_to_key
from math import gcd
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union

from loguru import logger

from app.core.ordinal import (
    ONE,
    ZERO,
    OMEGA,
    Ordinal,
    add,
    compare,
    last_exponent,
    left_subtract,
    mul,
    omax,
    omega_pow,
    omin,
    successor,
    to_str,
)
from app.utils.error_handlers import AmbientMismatchError, SemanticError, UnsupportedTermError


class _Infinity:
    """Upper level bound above every ordinal."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "inf"

    __str__ = __repr__

    def __reduce__(self):
        return (_Infinity, ())


INF = _Infinity()
Bound = Union[Ordinal, _Infinity]


def bound_lt(x: Ordinal, hi: Bound) -> bool:
    return hi is INF or compare(x, hi) < 0


def bound_min(h1: Bound, h2: Bound) -> Bound:
    if h1 is INF:
        return h2
    if h2 is INF:
        return h1
    return omin(h1, h2)


def bound_max(h1: Bound, h2: Bound) -> Bound:
    if h1 is INF or h2 is INF:
        return INF
    return omax(h1, h2)


def bound_le(h1: Bound, h2: Bound) -> bool:
    if h2 is INF:
        return True
    if h1 is INF:
        return False
    return compare(h1, h2) <= 0


def bound_str(h: Bound) -> str:
    return "inf" if h is INF else to_str(h)


# Ordinal helpers


def predecessor(x: Ordinal) -> Ordinal:
    terms = list(x.terms)
    e, k = terms[-1]
    terms[-1] = (e, k - 1)
    return Ordinal.from_terms(terms)


def drop_last_unit(x: Ordinal) -> Tuple[Ordinal, Ordinal]:
    """(δ, e) with x = δ + ω^e."""
    terms = list(x.terms)
    e, k = terms[-1]
    terms[-1] = (e, k - 1)
    return Ordinal.from_terms(terms), e


def first_point(a: Ordinal, lo: Ordinal, hi: Bound) -> Ordinal:
    """Least ξ >= max(a, 1) with lo <= le(ξ) < hi (assumes lo < hi)."""
    x = a if not a.is_zero else ONE
    high, low = x.split_at(lo)
    m = x if low.is_zero else add(high, omega_pow(lo))
    if bound_lt(last_exponent(m), hi):
        return m
    return add(m, omega_pow(lo))


def floor_point(b: Ordinal, lo: Ordinal) -> Ordinal:
    """Largest ξ <= b all of whose exponents are >= lo."""
    return b.split_at(lo)[0]


# Atoms


@dataclass(frozen=True)
class Strata:
    a: Ordinal
    b: Ordinal
    lo: Ordinal = ZERO
    hi: Bound = INF
    zero: bool = False

    @property
    def is_zero_atom(self) -> bool:
        return self.zero and self.b.is_zero

    def contains(self, x: Ordinal) -> bool:
        if x.is_zero:
            return self.zero
        return (
            compare(self.a, x) <= 0
            and compare(x, self.b) <= 0
            and compare(self.lo, last_exponent(x)) <= 0
            and bound_lt(last_exponent(x), self.hi)
        )

    def __str__(self) -> str:
        if self.is_zero_atom:
            return "{0}"
        if self.a == self.b:
            return "{" + to_str(self.a) + "}"
        if self.lo.is_zero and self.hi is INF:
            return f"[{self.a},{self.b}]"
        return f"strata({self.a},{self.b},{self.lo},{bound_str(self.hi)})"


@dataclass(frozen=True)
class Periodic:
    base: Ordinal
    exponent: Ordinal
    width: int
    start: int
    pattern: "StrataSet"

    @property
    def step(self) -> Ordinal:
        return mul(omega_pow(self.exponent), Ordinal.of(self.width))

    @property
    def hull_start(self) -> Ordinal:
        return add(self.base, mul(self.step, Ordinal.of(self.start)))

    @property
    def sup(self) -> Ordinal:
        return add(self.base, omega_pow(successor(self.exponent)))

    def offset(self, t: int) -> Ordinal:
        return add(self.base, mul(self.step, Ordinal.of(t)))

    def position(self, x: Ordinal) -> Optional[Tuple[int, Ordinal]]:
        """(t, σ) with x = base + step·t + σ, σ < step; None outside [base, sup)."""
        if compare(x, self.base) < 0 or compare(x, self.sup) >= 0:
            return None
        eta = left_subtract(self.base, x)
        if not eta.is_zero and eta.leading_exponent == self.exponent:
            c = eta.leading_coefficient
            rest = Ordinal.from_terms(eta.terms[1:])
        else:
            c, rest = 0, eta
        t, r = divmod(c, self.width)
        return t, add(mul(omega_pow(self.exponent), Ordinal.of(r)), rest)

    def contains(self, x: Ordinal) -> bool:
        pos = self.position(x)
        if pos is None:
            return False
        t, sigma = pos
        return t >= self.start and self.pattern.contains(sigma)

    def __str__(self) -> str:
        return f"periodic({self.base},{self.exponent},{self.width},{self.start},{self.pattern})"


Atom = Union[Strata, Periodic]
ZERO_ATOM = Strata(ZERO, ZERO, ZERO, INF, True)


def closed_interval(a: Ordinal, b: Ordinal) -> List[Atom]:
    if compare(a, b) > 0:
        return []
    if a.is_zero:
        return [ZERO_ATOM] + ([Strata(ONE, b)] if not b.is_zero else [])
    return [Strata(a, b)]


def below(c: Ordinal) -> List[Atom]:
    """Atoms for [0, c)."""
    if c.is_zero:
        return []
    if c.is_successor:
        return closed_interval(ZERO, predecessor(c))
    delta, e = drop_last_unit(c)
    return closed_interval(ZERO, delta) + [Strata(successor(delta), c, ZERO, e)]


def _atom_min(atom: Atom) -> Ordinal:
    if isinstance(atom, Periodic):
        return add(atom.hull_start, atom.pattern.minimum())
    return ZERO if atom.zero else atom.a


def _atom_sup(atom: Atom) -> Tuple[Ordinal, bool]:
    if isinstance(atom, Periodic):
        return atom.sup, False
    if atom.is_zero_atom:
        return ZERO, True
    return atom.b, bound_lt(last_exponent(atom.b), atom.hi)


def _translate_atom(atom: Atom, delta: Ordinal) -> List[Atom]:
    if delta.is_zero:
        return [atom]
    if isinstance(atom, Periodic):
        if atom.base.is_zero and compare(last_exponent(delta), successor(atom.exponent)) < 0:
            raise SemanticError(f"cannot translate {atom} by {delta}", error_code="INTERNAL_TRANSLATION")
        return [replace(atom, base=add(delta, atom.base))]
    out: List[Atom] = []
    if atom.zero:
        out.append(Strata(delta, delta))
    if not atom.b.is_zero:
        start = atom.a if not atom.a.is_zero else ONE
        out.append(Strata(add(delta, start), add(delta, atom.b), atom.lo, atom.hi))
    return out


def _normalize_atom(atom: Atom, top: Ordinal) -> List[Atom]:
    if isinstance(atom, Periodic):
        if atom.pattern.is_empty:
            return []
        if compare(atom.sup, top) > 0:
            out = []
            for piece in _periodic_cut(atom, ZERO, top):
                out.extend(_normalize_atom(piece, top))
            return out
        return [atom]
    out = []
    if atom.zero and atom.a.is_zero:
        out.append(ZERO_ATOM)
    if atom.b.is_zero or not bound_lt(atom.lo, atom.hi):
        return out
    b = floor_point(omin(atom.b, top), atom.lo)
    if b.is_zero:
        return out
    a = first_point(atom.a, atom.lo, atom.hi)
    if compare(a, b) > 0:
        return out
    hi = atom.hi
    if hi is not INF and compare(hi, b.leading_exponent) > 0:
        hi = INF
    out.append(Strata(a, b, atom.lo, hi))
    return out


def _strata_subsumes(big: Strata, small: Strata) -> bool:
    return (
        compare(big.a, small.a) <= 0
        and compare(small.b, big.b) <= 0
        and compare(big.lo, small.lo) <= 0
        and bound_le(small.hi, big.hi)
    )


def _merge(atoms: List[Atom]) -> List[Atom]:
    zero = any(isinstance(x, Strata) and x.is_zero_atom for x in atoms)
    periodic: List[Periodic] = []
    for x in atoms:
        if isinstance(x, Periodic) and x not in periodic:
            periodic.append(x)

    groups: Dict[Tuple[Ordinal, object], List[Strata]] = {}
    for x in atoms:
        if isinstance(x, Strata) and not x.is_zero_atom:
            groups.setdefault((x.lo, x.hi), []).append(x)

    merged: List[Strata] = []
    for (lo, hi), items in groups.items():
        items.sort(key=cmp_to_key(lambda u, v: compare(u.a, v.a)))
        cur = items[0]
        for nxt in items[1:]:
            if compare(nxt.a, first_point(successor(cur.b), lo, hi)) <= 0:
                cur = Strata(cur.a, omax(cur.b, nxt.b), lo, hi)
            else:
                merged.append(cur)
                cur = nxt
        merged.append(cur)

    kept: List[Strata] = []
    for i, x in enumerate(merged):
        if any(j != i and _strata_subsumes(y, x) and (y != x or j < i) for j, y in enumerate(merged)):
            continue
        if x.a == x.b and any(p.contains(x.a) for p in periodic):
            continue
        kept.append(x)

    out: List[Atom] = ([ZERO_ATOM] if zero else []) + kept + periodic
    return out


def _atom_order(u: Atom, v: Atom) -> int:
    c = compare(_atom_min(u), _atom_min(v))
    if c:
        return c
    su, sv = str(u), str(v)
    return (su > sv) - (su < sv)


# Atom intersections


def _periodic_cut(p: Periodic, a: Ordinal, b: Ordinal) -> List[Atom]:
    """p ∩ [a, b] as atoms; finitely many translated copies when b < sup."""
    h0, sup = p.hull_start, p.sup
    if compare(b, h0) < 0 or compare(a, sup) >= 0 or compare(a, b) > 0:
        return []
    step = p.step
    low_cut = compare(a, h0) > 0
    t_a, s_a = p.position(a) if low_cut else (p.start, ZERO)

    if compare(b, sup) >= 0:
        if not low_cut:
            return [p]
        out = []
        head = p.pattern.intersect(StrataSet.build(step, closed_interval(s_a, step)))
        out.extend(head.translate(p.offset(t_a), step).atoms if not head.is_empty else [])
        out.append(replace(p, start=t_a + 1))
        return out

    t_b, s_b = p.position(b)
    out: List[Atom] = []
    for t in range(t_a, t_b + 1):
        piece = p.pattern
        if t == t_a and low_cut:
            piece = piece.intersect(StrataSet.build(step, closed_interval(s_a, step)))
        if t == t_b:
            piece = piece.intersect(StrataSet.build(step, closed_interval(ZERO, s_b)))
        for atom in piece.atoms:
            out.extend(_translate_atom(atom, p.offset(t)))
    return out


def _periodic_band(p: Periodic, lo: Ordinal, hi: Bound) -> Periodic:
    band = StrataSet.build(
        p.step,
        [Strata(ZERO, p.step, lo, hi, zero=compare(lo, p.exponent) <= 0 and bound_lt(p.exponent, hi))],
    )
    return replace(p, pattern=p.pattern.intersect(band))


def _regroup(p: Periodic, width: int) -> Tuple[List[Atom], Periodic]:
    """Rewrite p with a width that is a multiple of its own: finite head plus tail."""
    k = width // p.width
    if k == 1:
        return [], p
    big_step = mul(omega_pow(p.exponent), Ordinal.of(width))
    copies: List[Atom] = []
    for i in range(k):
        for atom in p.pattern.atoms:
            copies.extend(_translate_atom(atom, mul(p.step, Ordinal.of(i))))
    start = -(-p.start // k)
    head: List[Atom] = []
    for t in range(p.start, start * k):
        for atom in p.pattern.atoms:
            head.extend(_translate_atom(atom, p.offset(t)))
    tail = Periodic(p.base, p.exponent, width, start, StrataSet.build(big_step, copies))
    return head, tail


def _meet_atoms(x: Atom, y: Atom) -> List[Atom]:
    if isinstance(x, Strata) and isinstance(y, Strata):
        return [
            Strata(
                omax(x.a, y.a),
                omin(x.b, y.b),
                omax(x.lo, y.lo),
                bound_min(x.hi, y.hi),
                zero=x.zero and y.zero,
            )
        ]
    if isinstance(x, Strata):
        x, y = y, x
    if isinstance(y, Strata):
        if y.is_zero_atom:
            return []
        banded = _periodic_band(x, y.lo, y.hi)
        if banded.pattern.is_empty:
            return []
        return _periodic_cut(banded, y.a, y.b)
    return _meet_periodic(x, y)


def _meet_periodic(p: Periodic, q: Periodic) -> List[Atom]:
    order = compare(p.sup, q.sup)
    if order > 0:
        p, q = q, p
    if order != 0:
        out: List[Atom] = []
        for piece in _periodic_cut(q, p.hull_start, p.sup):
            out.extend(_meet_atoms(piece, p))
        return out
    width = p.width * q.width // gcd(p.width, q.width)
    head_p, tail_p = _regroup(p, width)
    head_q, tail_q = _regroup(q, width)
    out = []
    for h in head_p:
        out.extend(_meet_atoms(h, q))
    for h in head_q:
        out.extend(_meet_atoms(h, tail_p))
    pattern = tail_p.pattern.intersect(tail_q.pattern)
    if not pattern.is_empty:
        out.append(replace(tail_p, start=max(tail_p.start, tail_q.start), pattern=pattern))
    return out


def _complement_atom(atom: Atom, top: Ordinal) -> List[Atom]:
    if isinstance(atom, Periodic):
        out = below(atom.hull_start)
        if compare(atom.sup, top) <= 0:
            out.append(Strata(atom.sup, top))
        rest = atom.pattern.complement().intersect(StrataSet.build(atom.step, below(atom.step)))
        if not rest.is_empty:
            out.append(replace(atom, pattern=rest))
        return out
    if atom.is_zero_atom:
        return [Strata(ONE, top)] if not top.is_zero else []
    out = below(atom.a)
    if compare(atom.b, top) < 0:
        out.append(Strata(successor(atom.b), top))
    if not atom.lo.is_zero:
        out.append(Strata(atom.a, atom.b, ZERO, atom.lo))
    if atom.hi is not INF:
        out.append(Strata(atom.a, atom.b, atom.hi, INF))
    return out


def _acc_atom(atom: Atom) -> List[Atom]:
    if isinstance(atom, Periodic):
        inner = atom.pattern.acc()
        out: List[Atom] = []
        proper = inner.intersect(StrataSet.build(atom.step, below(atom.step)))
        if not proper.is_empty:
            out.append(replace(atom, pattern=proper))
        if inner.contains(atom.step):
            out.append(replace(atom, start=atom.start + 1, pattern=StrataSet.build(atom.step, [ZERO_ATOM])))
        out.append(Strata(atom.sup, atom.sup))
        return out
    if atom.is_zero_atom or atom.a == atom.b:
        return []
    return [Strata(successor(atom.a), atom.b, successor(atom.lo), INF)]


# Level-set arithmetic for the closed forms


def merge_bands(bands: Sequence[Tuple[Ordinal, Bound]]) -> List[Tuple[Ordinal, Bound]]:
    items = sorted(bands, key=cmp_to_key(lambda u, v: compare(u[0], v[0])))
    merged: List[Tuple[Ordinal, Bound]] = []
    for lo, hi in items:
        if merged and bound_le(lo, merged[-1][1]):
            merged[-1] = (merged[-1][0], bound_max(merged[-1][1], hi))
        else:
            merged.append((lo, hi))
    return merged


def in_bands(level: Ordinal, bands: Sequence[Tuple[Ordinal, Bound]]) -> bool:
    return any(compare(lo, level) <= 0 and bound_lt(level, hi) for lo, hi in bands)


def bands_type_below(bands: Sequence[Tuple[Ordinal, Bound]], cap: Ordinal) -> Ordinal:
    """Order type of (∪ [lo, hi)) ∩ [0, cap)."""
    total = ZERO
    for lo, hi in merge_bands(bands):
        if compare(lo, cap) >= 0:
            break
        end = bound_min(hi, cap)
        total = add(total, left_subtract(lo, end))
    return total


def bands_threshold(bands: Sequence[Tuple[Ordinal, Bound]], alpha: Ordinal) -> Optional[Ordinal]:
    """Least g with order type of (∪ bands) ∩ [0, g) >= alpha, or None."""
    if alpha.is_zero:
        return ZERO
    cum, prev_end = ZERO, ZERO
    for lo, hi in merge_bands(bands):
        if compare(cum, alpha) >= 0:
            return prev_end
        need = left_subtract(cum, alpha)
        if hi is INF or compare(need, left_subtract(lo, hi)) <= 0:
            return add(lo, need)
        cum = add(cum, left_subtract(lo, hi))
        prev_end = hi
    return prev_end if compare(cum, alpha) >= 0 else None


def _max_level(a: Ordinal, b: Ordinal, lo: Ordinal, hi: Bound) -> Tuple[Ordinal, bool]:
    """Supremum of le over points of Strata(a, b, lo, hi) and whether it is attained."""
    if b.is_zero:
        # the point 0 is isolated
        return ZERO, True
    prefix = ZERO
    for e, c in b.terms:
        t_k = add(prefix, mul(omega_pow(e), Ordinal.of(c)))
        if compare(t_k, a) >= 0:
            if bound_lt(e, hi):
                return e, True
            if compare(a, t_k) < 0:
                if hi.is_successor:
                    return predecessor(hi), True
                return hi, False
            nxt = first_point(successor(t_k), lo, hi)
            return _max_level(nxt, b, lo, hi)
        prefix = t_k
    return last_exponent(b), True


def _level_F(z: Ordinal, bands: Sequence[Tuple[Ordinal, Bound]]) -> Ordinal:
    """Order type of {ξ ∈ (0, z) : le(ξ) ∈ bands}."""
    merged = merge_bands(bands)
    if not merged or z.is_zero:
        return ZERO
    c1 = merged[0][0]

    def block(g: Ordinal) -> Ordinal:
        return omega_pow(left_subtract(c1, g)) if compare(g, c1) > 0 else ZERO

    total, prefix = ZERO, ZERO
    for e, n in z.terms:
        if not prefix.is_zero and in_bands(last_exponent(prefix), merged):
            total = add(total, ONE)
        inner = block(e)
        total = add(total, inner)
        if n > 1:
            unit = add(ONE if in_bands(e, merged) else ZERO, inner)
            total = add(total, mul(unit, Ordinal.of(n - 1)))
        prefix = add(prefix, mul(omega_pow(e), Ordinal.of(n)))
    return total


# The set type


@dataclass(frozen=True)
class StrataSet:
    top: Ordinal
    atoms: Tuple[Atom, ...] = ()

    @classmethod
    def build(cls, top: Ordinal, atoms: Sequence[Atom]) -> "StrataSet":
        normalized: List[Atom] = []
        for atom in atoms:
            normalized.extend(_normalize_atom(atom, top))
        merged = _merge(normalized)
        merged.sort(key=cmp_to_key(_atom_order))
        return cls(top, tuple(merged))

    @classmethod
    def empty(cls, top: Ordinal) -> "StrataSet":
        return cls(top, ())

    @classmethod
    def interval(cls, top: Ordinal, a: Ordinal, b: Ordinal) -> "StrataSet":
        return cls.build(top, closed_interval(a, b))

    @classmethod
    def full(cls, top: Ordinal) -> "StrataSet":
        return cls.interval(top, ZERO, top)

    @classmethod
    def points_of(cls, top: Ordinal, points: Sequence[Ordinal]) -> "StrataSet":
        return cls.build(top, [ZERO_ATOM if p.is_zero else Strata(p, p) for p in points])

    @classmethod
    def below(cls, top: Ordinal, c: Ordinal) -> "StrataSet":
        return cls.build(top, below(c))

    @classmethod
    def above(cls, top: Ordinal, c: Ordinal) -> "StrataSet":
        """(c, top]."""
        return cls.build(top, [Strata(successor(c), top)])

    # Basic queries

    @property
    def is_empty(self) -> bool:
        return not self.atoms

    @property
    def is_pure(self) -> bool:
        return all(isinstance(a, Strata) for a in self.atoms)

    def contains(self, x: Ordinal) -> bool:
        return any(atom.contains(x) for atom in self.atoms)

    def __contains__(self, x: Ordinal) -> bool:
        return self.contains(x)

    def _check(self, other: "StrataSet"):
        if self.top != other.top:
            raise AmbientMismatchError(self.top, other.top)

    def with_top(self, top: Ordinal) -> "StrataSet":
        return StrataSet.build(top, self.atoms)

    def minimum(self) -> Ordinal:
        if self.is_empty:
            raise SemanticError("empty set has no minimum")
        return _atom_min(self.atoms[0])

    def supremum(self) -> Tuple[Ordinal, bool]:
        """(sup, attained)."""
        if self.is_empty:
            raise SemanticError("empty set has no supremum")
        best, attained = _atom_sup(self.atoms[0])
        for atom in self.atoms[1:]:
            value, att = _atom_sup(atom)
            order = compare(value, best)
            if order > 0:
                best, attained = value, att
            elif order == 0:
                attained = attained or att
        return best, attained

    # Boolean algebra

    def union(self, other: "StrataSet") -> "StrataSet":
        self._check(other)
        return StrataSet.build(self.top, self.atoms + other.atoms)

    def intersect(self, other: "StrataSet") -> "StrataSet":
        self._check(other)
        out: List[Atom] = []
        for x in self.atoms:
            for y in other.atoms:
                out.extend(_meet_atoms(x, y))
        return StrataSet.build(self.top, out)

    def complement(self) -> "StrataSet":
        result = StrataSet.full(self.top)
        for atom in self.atoms:
            result = result.intersect(StrataSet.build(self.top, _complement_atom(atom, self.top)))
        return result

    def difference(self, other: "StrataSet") -> "StrataSet":
        self._check(other)
        result = self
        for atom in other.atoms:
            if result.is_empty:
                break
            result = result.intersect(StrataSet.build(self.top, _complement_atom(atom, self.top)))
        return result

    def issubset(self, other: "StrataSet") -> bool:
        return self.difference(other).is_empty

    def same_as(self, other: "StrataSet") -> bool:
        """Extensional equality via mutual difference."""
        return self.issubset(other) and other.issubset(self)

    def translate(self, delta: Ordinal, top: Optional[Ordinal] = None) -> "StrataSet":
        """{delta + ξ : ξ ∈ self} inside [0, top] (default delta + self.top)."""
        out: List[Atom] = []
        for atom in self.atoms:
            out.extend(_translate_atom(atom, delta))
        return StrataSet.build(top if top is not None else add(delta, self.top), out)

    # Topology

    def acc(self) -> "StrataSet":
        out: List[Atom] = []
        for atom in self.atoms:
            out.extend(_acc_atom(atom))
        return StrataSet.build(self.top, out)

    def closure(self) -> "StrataSet":
        return self.union(self.acc())

    def is_closed(self) -> bool:
        return self.acc().issubset(self)

    def derivative(self) -> "StrataSet":
        return self.intersect(self.acc())

    def isolated_points(self) -> "StrataSet":
        return self.difference(self.derivative())

    def derivative_chain(self, bound: int) -> List["StrataSet"]:
        """[s, ∂s, ∂²s, ...] up to the first empty set or bound + 1 entries."""
        from app.utils.cache_manager import derivative_cache

        return derivative_cache.chain(("strata", self), self, lambda s: s.derivative(), bound)

    def derivative_alpha(self, alpha: Ordinal, bound: Optional[int] = None) -> "StrataSet":
        if alpha.is_zero:
            return self
        if self.is_pure:
            return self._derivative_closed_form(alpha)
        bound = bound or _bound()
        chain = self.derivative_chain(bound)
        if alpha.is_finite and alpha.to_int() < len(chain):
            return chain[alpha.to_int()]
        if chain[-1].is_empty:
            return chain[-1]
        raise UnsupportedTermError(
            f"derivative of order {alpha} is beyond {bound} iterations for a periodic set",
            component="strata",
        )

    def point_rank(self, x: Ordinal, bound: Optional[int] = None) -> Ordinal:
        if not self.contains(x):
            raise SemanticError(f"{x} is not in the set", details={"set": str(self)})
        if self.is_pure:
            if x.is_zero:
                return ZERO
            bands = [(a.lo, a.hi) for a in self._positive() if compare(a.a, x) < 0 and compare(x, a.b) <= 0]
            return bands_type_below(bands, last_exponent(x))
        chain = self.derivative_chain(bound or _bound())
        for n in range(len(chain) - 1):
            if not chain[n + 1].contains(x):
                return Ordinal.of(n)
        raise UnsupportedTermError(f"rank of {x} exceeds the iteration bound", component="strata")

    def cb_rank(self, bound: Optional[int] = None) -> Ordinal:
        return self.rank_info(bound)[0]

    def rank_info(self, bound: Optional[int] = None) -> Tuple[Ordinal, bool]:
        """(rank, attained): attained is False when the point ranks have no maximum."""
        if self.is_empty:
            raise SemanticError("cb_rank of the empty set is undefined")
        if not self.is_pure:
            chain = self.derivative_chain(bound or _bound())
            if not chain[-1].is_empty:
                raise UnsupportedTermError("rank exceeds the iteration bound", component="strata")
            return Ordinal.of(len(chain) - 2), True
        best, attained = ZERO, True
        for bands, piece in self._cell_pieces():
            level, level_attained = _max_level(piece.a, piece.b, piece.lo, piece.hi)
            rank = bands_type_below(bands, level)
            order = compare(rank, best)
            if order > 0:
                best, attained = rank, level_attained
            elif order == 0 and level_attained:
                attained = True
        return best, attained

    def is_unitary(self, bound: Optional[int] = None) -> bool:
        rank, attained = self.rank_info(bound)
        if not attained:
            return False
        return self.derivative_alpha(rank, bound).order_type() == ONE

    def end_point(self, bound: Optional[int] = None) -> Optional[Ordinal]:
        if not self.is_unitary(bound):
            return None
        return self.derivative_alpha(self.cb_rank(bound), bound).minimum()

    def _positive(self) -> List[Strata]:
        return [a for a in self.atoms if isinstance(a, Strata) and not a.is_zero_atom]

    def _breakpoints(self) -> List[Ordinal]:
        pts: List[Ordinal] = []
        for atom in self._positive():
            for p in (atom.a, atom.b):
                if p not in pts:
                    pts.append(p)
        pts.sort(key=cmp_to_key(compare))
        return pts

    def _cell_pieces(self) -> Iterator[Tuple[list, Strata]]:
        """(active bands, piece) for each atom's part in each cell (p, q]; the first breakpoint has rank 0."""
        positive = self._positive()
        breaks = self._breakpoints()
        if breaks:
            first = breaks[0]
            for atom in positive:
                if atom.contains(first):
                    yield [], Strata(first, first, atom.lo, atom.hi)
                    break
        if any(a.is_zero_atom for a in self.atoms):
            yield [], ZERO_ATOM
        for p, q in zip(breaks, breaks[1:]):
            bands = [(a.lo, a.hi) for a in positive if compare(a.a, p) <= 0 and compare(q, a.b) <= 0]
            for atom in positive:
                lo_pt = omax(atom.a, successor(p))
                hi_pt = omin(atom.b, q)
                if compare(lo_pt, hi_pt) > 0:
                    continue
                normalized = _normalize_atom(Strata(lo_pt, hi_pt, atom.lo, atom.hi), self.top)
                for piece in normalized:
                    if isinstance(piece, Strata) and not piece.is_zero_atom:
                        yield bands, piece

    def _derivative_closed_form(self, alpha: Ordinal) -> "StrataSet":
        breaks = self._breakpoints()
        positive = self._positive()
        out: List[Atom] = []
        for p, q in zip(breaks, breaks[1:]):
            bands = [(a.lo, a.hi) for a in positive if compare(a.a, p) <= 0 and compare(q, a.b) <= 0]
            g = bands_threshold(bands, alpha)
            if g is None:
                continue
            for atom in positive:
                out.append(Strata(omax(atom.a, successor(p)), omin(atom.b, q), omax(atom.lo, g), atom.hi))
        logger.debug(f"closed-form derivative of order {alpha}: {len(out)} candidate atoms")
        return StrataSet.build(self.top, out)

    # Order type

    def order_type(self) -> Ordinal:
        if self.is_empty:
            return ZERO
        if self.is_pure:
            return self._order_type_pure()
        return self._order_type_periodic()

    def _order_type_pure(self) -> Ordinal:
        positive = self._positive()
        total = ONE if any(a.is_zero_atom for a in self.atoms) else ZERO
        breaks = self._breakpoints()
        for i, q in enumerate(breaks):
            if i > 0:
                p = breaks[i - 1]
                bands = [(a.lo, a.hi) for a in positive if compare(a.a, p) <= 0 and compare(q, a.b) <= 0]
                if bands:
                    total = add(total, left_subtract(_level_F(successor(p), bands), _level_F(q, bands)))
            if self.contains(q):
                total = add(total, ONE)
        return total

    def _order_type_periodic(self) -> Ordinal:
        periodic = [a for a in self.atoms if isinstance(a, Periodic)]
        lead = periodic[0]
        for atom in periodic[1:]:
            if compare(atom.sup, lead.sup) > 0:
                lead = atom
        aligned = [a for a in periodic if a.sup == lead.sup]
        width = 1
        for atom in aligned:
            width = width * atom.width // gcd(width, atom.width)
        tails = []
        t_star = 1
        for atom in aligned:
            _, tail = _regroup(atom, width)
            tails.append(tail)
            t_star = max(t_star, tail.start)
        frame = Periodic(lead.base, lead.exponent, width, 1, StrataSet.empty(ONE))
        for atom in self.atoms:
            if atom in aligned:
                continue
            if isinstance(atom, Periodic):
                marks = [atom.hull_start, atom.sup]
            else:
                marks = [_atom_min(atom), atom.b]
            for mark in marks:
                pos = frame.position(mark)
                if pos is not None:
                    t_star = max(t_star, pos[0] + 1)
        cut = frame.offset(t_star)
        step = frame.step

        pattern_atoms: List[Atom] = []
        for tail in tails:
            pattern_atoms.extend(tail.pattern.atoms)
        for atom in self.atoms:
            if isinstance(atom, Strata) and not atom.is_zero_atom:
                if compare(atom.a, cut) <= 0 and compare(lead.sup, atom.b) <= 0:
                    zero_in = compare(atom.lo, lead.exponent) <= 0 and bound_lt(lead.exponent, atom.hi)
                    pattern_atoms.append(Strata(ZERO, step, atom.lo, atom.hi, zero=zero_in))
        pattern = StrataSet.build(step, pattern_atoms).intersect(StrataSet.build(step, below(step)))

        left = self.intersect(StrataSet.build(self.top, below(cut)))
        right = self.intersect(StrataSet.build(self.top, [Strata(lead.sup, self.top)]))
        middle = mul(pattern.order_type(), OMEGA) if not pattern.is_empty else ZERO
        return add(add(left.order_type(), middle), right.order_type())

    # Enumeration

    def is_finite(self) -> bool:
        return self.order_type().is_finite

    def points(self, limit: int = 100000) -> List[Ordinal]:
        """All points of a finite set in increasing order."""
        count = self.order_type()
        if not count.is_finite or count.to_int() > limit:
            raise UnsupportedTermError(f"set of order type {count} cannot be enumerated", component="strata")
        out: List[Ordinal] = []
        for atom in self.atoms:
            if isinstance(atom, Periodic):
                continue
            if atom.is_zero_atom:
                out.append(ZERO)
                continue
            x = atom.a
            while compare(x, atom.b) <= 0:
                out.append(x)
                x = first_point(successor(x), atom.lo, atom.hi)
        unique: List[Ordinal] = []
        for x in sorted(out, key=cmp_to_key(compare)):
            if not unique or unique[-1] != x:
                unique.append(x)
        return unique

    def attained_levels(self) -> Dict[Ordinal, Ordinal]:
        """level -> least point of that level; raises when infinitely many levels occur."""
        found: Dict[Ordinal, Ordinal] = {}

        def note(level: Ordinal, point: Ordinal):
            if level not in found or compare(point, found[level]) < 0:
                found[level] = point

        for atom in self.atoms:
            if isinstance(atom, Periodic):
                origin = atom.hull_start
                if atom.pattern.contains(ZERO):
                    note(atom.exponent, origin)
                for level, point in atom.pattern.difference(StrataSet.points_of(atom.step, [ZERO])).attained_levels().items():
                    note(level, add(origin, point))
            elif atom.is_zero_atom:
                continue
            else:
                single = StrataSet(self.top, (atom,))
                for point in single.points():
                    note(last_exponent(point), point)
        return found

    def __str__(self) -> str:
        if self.is_empty:
            return "{}"
        parts: List[str] = []
        atoms = list(self.atoms)
        if atoms and isinstance(atoms[0], Strata) and atoms[0].is_zero_atom:
            joined = next(
                (a for a in atoms[1:] if isinstance(a, Strata) and a.a == ONE and a.lo.is_zero and a.hi is INF),
                None,
            )
            if joined is not None:
                atoms.remove(joined)
                parts.append(f"[0,{joined.b}]")
                atoms = atoms[1:]
        singles = [a for a in atoms if isinstance(a, Strata) and (a.is_zero_atom or a.a == a.b)]
        if singles:
            parts.append("{" + ",".join("0" if a.is_zero_atom else to_str(a.a) for a in singles) + "}")
        parts.extend(str(a) for a in atoms if a not in singles)
        return " | ".join(parts)


def _bound() -> int:
    from app.config import config

    return config.derivative_bound


# Module-level operations


def union(s: StrataSet, t: StrataSet) -> StrataSet:
    return s.union(t)


def intersect(s: StrataSet, t: StrataSet) -> StrataSet:
    return s.intersect(t)


def difference(s: StrataSet, t: StrataSet) -> StrataSet:
    return s.difference(t)


def acc(s: StrataSet) -> StrataSet:
    return s.acc()


def derivative(s: StrataSet) -> StrataSet:
    return s.derivative()


def derivative_alpha(s: StrataSet, alpha: Ordinal) -> StrataSet:
    return s.derivative_alpha(alpha)


def point_rank(s: StrataSet, x: Ordinal) -> Ordinal:
    return s.point_rank(x)


def cb_rank(s: StrataSet) -> Ordinal:
    return s.cb_rank()


def is_unitary(s: StrataSet) -> bool:
    return s.is_unitary()


def isolated_points(s: StrataSet) -> StrataSet:
    return s.isolated_points()


def order_type(s: StrataSet) -> Ordinal:
    return s.order_type()
