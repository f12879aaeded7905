"""
Ordinal notation in Cantor normal form with ε-number atoms.

An ordinal is either zero, an atom ``e<n>`` standing for ε_n (with ω^ε_n = ε_n),
or a finite sum of terms ω^e·c with strictly decreasing exponents e and
positive integer coefficients c. Every constructor returns the canonical form,
so structural equality is ordinal equality.
"""

from functools import lru_cache, total_ordering
from typing import Iterable, Optional, Tuple, Union

from app.utils.error_handlers import SemanticError

Term = Tuple["Ordinal", int]
OrdinalLike = Union["Ordinal", int]

_SUPERSCRIPTS = str.maketrans("0123456789", "⁰¹²³⁴⁵⁶⁷⁸⁹")
_SUBSCRIPTS = str.maketrans("0123456789", "₀₁₂₃₄₅₆₇₈₉")


@total_ordering
class Ordinal:
    """Immutable ordinal value below ε_ω."""

    __slots__ = ("_terms", "_eps", "_hash")

    def __init__(self, terms: Tuple[Term, ...] = (), eps: Optional[int] = None):
        # Use the module constructors; this one trusts its input.
        self._terms = terms
        self._eps = eps
        self._hash = hash((terms, eps))

    # Construction

    @staticmethod
    def of(value: OrdinalLike) -> "Ordinal":
        if isinstance(value, Ordinal):
            return value
        if isinstance(value, bool) or not isinstance(value, int):
            raise TypeError(f"cannot build an ordinal from {value!r}")
        if value < 0:
            raise SemanticError(f"negative natural {value} is not an ordinal")
        if value == 0:
            return ZERO
        return Ordinal(((ZERO, value),))

    @staticmethod
    def epsilon(index: int) -> "Ordinal":
        if index < 0:
            raise SemanticError(f"ε index must be a natural, got {index}")
        return Ordinal((), index)

    @staticmethod
    def from_terms(terms: Iterable[Term]) -> "Ordinal":
        """Build from terms already in decreasing exponent order."""
        cleaned = tuple((e, c) for e, c in terms if c > 0)
        if len(cleaned) == 1 and cleaned[0][1] == 1 and cleaned[0][0].is_epsilon:
            return cleaned[0][0]
        return Ordinal(cleaned)

    # Structure

    @property
    def terms(self) -> Tuple[Term, ...]:
        if self._eps is not None:
            return ((self, 1),)
        return self._terms

    @property
    def is_zero(self) -> bool:
        return self._eps is None and not self._terms

    @property
    def is_epsilon(self) -> bool:
        return self._eps is not None

    @property
    def epsilon_index(self) -> Optional[int]:
        return self._eps

    @property
    def is_finite(self) -> bool:
        return self.is_zero or (self._eps is None and len(self._terms) == 1 and self._terms[0][0].is_zero)

    @property
    def is_successor(self) -> bool:
        return not self.is_zero and self.terms[-1][0].is_zero

    @property
    def is_limit(self) -> bool:
        return not self.is_zero and not self.terms[-1][0].is_zero

    def to_int(self) -> int:
        if not self.is_finite:
            raise SemanticError(f"{self} is not finite")
        return 0 if self.is_zero else self._terms[0][1]

    @property
    def leading_exponent(self) -> "Ordinal":
        return ZERO if self.is_zero else self.terms[0][0]

    @property
    def leading_coefficient(self) -> int:
        return 0 if self.is_zero else self.terms[0][1]

    def coefficient_of(self, exponent: "Ordinal") -> int:
        for e, c in self.terms:
            if e == exponent:
                return c
        return 0

    def split_at(self, exponent: "Ordinal") -> Tuple["Ordinal", "Ordinal"]:
        """(high, low): terms with exponent >= `exponent` and the rest; high + low == self."""
        high = [t for t in self.terms if compare(t[0], exponent) >= 0]
        low = [t for t in self.terms if compare(t[0], exponent) < 0]
        return Ordinal.from_terms(high), Ordinal.from_terms(low)

    # Python protocol

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int) and not isinstance(other, bool):
            other = Ordinal.of(other) if other >= 0 else None
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self._eps == other._eps and self._terms == other._terms

    def __lt__(self, other: OrdinalLike) -> bool:
        return compare(self, Ordinal.of(other)) < 0

    def __hash__(self) -> int:
        return self._hash

    def __add__(self, other: OrdinalLike) -> "Ordinal":
        return add(self, Ordinal.of(other))

    def __radd__(self, other: int) -> "Ordinal":
        return add(Ordinal.of(other), self)

    def __mul__(self, other: OrdinalLike) -> "Ordinal":
        return mul(self, Ordinal.of(other))

    def __rmul__(self, other: int) -> "Ordinal":
        return mul(Ordinal.of(other), self)

    def __bool__(self) -> bool:
        return not self.is_zero

    def __str__(self) -> str:
        return to_str(self)

    def __repr__(self) -> str:
        return f"Ordinal('{to_str(self)}')"


ZERO = Ordinal()
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


# Comparison


@lru_cache(maxsize=65536)
def compare(a: Ordinal, b: Ordinal) -> int:
    """-1, 0 or 1. Atoms compare by index; everything else lexicographically by terms."""
    if a == b:
        return 0
    if a.is_epsilon and b.is_epsilon:
        return -1 if a.epsilon_index < b.epsilon_index else 1
    at, bt = a.terms, b.terms
    for (ea, ca), (eb, cb) in zip(at, bt):
        c = compare(ea, eb)
        if c:
            return c
        if ca != cb:
            return -1 if ca < cb else 1
    if len(at) == len(bt):
        return 0
    return -1 if len(at) < len(bt) else 1


def omax(*values: Ordinal) -> Ordinal:
    best = values[0]
    for v in values[1:]:
        if compare(v, best) > 0:
            best = v
    return best


def omin(*values: Ordinal) -> Ordinal:
    best = values[0]
    for v in values[1:]:
        if compare(v, best) < 0:
            best = v
    return best


# Arithmetic


@lru_cache(maxsize=65536)
def add(a: Ordinal, b: Ordinal) -> Ordinal:
    if b.is_zero:
        return a
    if a.is_zero:
        return b
    bt = b.terms
    lead = bt[0][0]
    out = []
    for e, c in a.terms:
        order = compare(e, lead)
        if order > 0:
            out.append((e, c))
        elif order == 0:
            out.append((e, c + bt[0][1]))
            out.extend(bt[1:])
            return Ordinal.from_terms(out)
        else:
            break
    out.extend(bt)
    return Ordinal.from_terms(out)


@lru_cache(maxsize=65536)
def mul(a: Ordinal, b: Ordinal) -> Ordinal:
    if a.is_zero or b.is_zero:
        return ZERO
    at = a.terms
    a1, c1 = at[0]
    result = ZERO
    for e, d in b.terms:
        if e.is_zero:
            piece = Ordinal.from_terms(((a1, c1 * d),) + tuple(at[1:]))
        else:
            piece = Ordinal.from_terms(((add(a1, e), d),))
        result = add(result, piece)
    return result


def omega_pow(e: OrdinalLike) -> Ordinal:
    e = Ordinal.of(e)
    if e.is_zero:
        return ONE
    if e.is_epsilon:
        return e
    return Ordinal.from_terms(((e, 1),))


def natural_sum(a: Ordinal, b: Ordinal) -> Ordinal:
    merged = list(a.terms)
    for e, c in b.terms:
        for i, (f, d) in enumerate(merged):
            order = compare(e, f)
            if order == 0:
                merged[i] = (f, d + c)
                break
            if order > 0:
                merged.insert(i, (e, c))
                break
        else:
            merged.append((e, c))
    return Ordinal.from_terms(merged)


def left_subtract(c: Ordinal, d: Ordinal) -> Ordinal:
    """The unique x with c + x = d; requires c <= d."""
    if compare(c, d) > 0:
        raise SemanticError(f"cannot subtract {c} from the smaller {d}")
    ct, dt = c.terms, d.terms
    i = 0
    while i < len(ct) and ct[i] == dt[i]:
        i += 1
    if i == len(ct):
        return Ordinal.from_terms(dt[i:])
    ec, cc = ct[i]
    ed, cd = dt[i]
    if ec == ed:
        return Ordinal.from_terms(((ed, cd - cc),) + tuple(dt[i + 1:]))
    return Ordinal.from_terms(dt[i:])


def successor(a: Ordinal) -> Ordinal:
    return add(a, ONE)


# Predicates and derived quantities


def is_indecomposable(a: Ordinal) -> bool:
    if a.is_zero:
        raise SemanticError("0 is not indecomposable", details={"operation": "is_indecomposable"})
    return len(a.terms) == 1 and a.terms[0][1] == 1


def is_epsilon(a: Ordinal) -> bool:
    return a.is_epsilon


def ln(rho: Ordinal) -> Ordinal:
    if rho.is_zero or not is_indecomposable(rho):
        raise SemanticError(f"ln needs an indecomposable ordinal, got {rho}")
    return rho.terms[0][0]


def last_exponent(a: Ordinal) -> Ordinal:
    if a.is_zero:
        raise SemanticError("0 has no last exponent", details={"operation": "last_exponent"})
    return a.terms[-1][0]


def rank_of_ordinal_space(gamma: Ordinal) -> Ordinal:
    """Cantor–Bendixson rank of [0, gamma]."""
    return gamma.leading_exponent


# Printing


def _exponent_str(e: Ordinal) -> str:
    if e.is_finite:
        return str(e.to_int())
    if e == OMEGA:
        return "w"
    return f"({to_str(e)})"


def to_str(a: Ordinal) -> str:
    if a.is_zero:
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero:
            parts.append(str(c))
            continue
        if e.is_epsilon:
            base = f"e{e.epsilon_index}"
        elif e == ONE:
            base = "w"
        else:
            base = f"w^{_exponent_str(e)}"
        parts.append(base if c == 1 else f"{base}*{c}")
    return " + ".join(parts)


def pretty(a: Ordinal) -> str:
    """Unicode rendering used in algebra labels."""
    if a.is_zero:
        return "0"
    parts = []
    for e, c in a.terms:
        if e.is_zero:
            parts.append(str(c))
            continue
        if e.is_epsilon:
            base = "ε" + str(e.epsilon_index).translate(_SUBSCRIPTS)
        elif e == ONE:
            base = "ω"
        elif e.is_finite:
            base = "ω" + str(e.to_int()).translate(_SUPERSCRIPTS)
        elif e == OMEGA:
            base = "ω^ω"
        else:
            base = f"ω^({pretty(e)})"
        parts.append(base if c == 1 else f"{base}·{c}")
    return "+".join(parts)
