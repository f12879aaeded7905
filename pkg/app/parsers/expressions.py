"""
Grammars for ordinal literals, set expressions and space terms.

Ordinals:  expr := term ('+' term)* ;
           term := 'w' ['^' '(' expr ')' | '^' atom] ['*' nat] | 'eN' ['*' nat] | nat
Sets:      union of '[a,b]', '{x,...}', 'strata(a,b,lo,hi)', 'periodic(base,e,width,start,set)',
           'club(g1,g2,... [; w*k])' combined with '|', '&', '\\' and parentheses
Terms:     ord(γ), prod(t,u), vecsum(ρ,t1,...), disj(t,u), T(θ), K(θ), plank(α,β), tri(α), XC(set,ν)

Ordinal literals must be canonical unless `normalize` is set.
"""

import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

from app.core.ordinal import ZERO, Ordinal, add, compare, mul, omax, omega_pow, to_str
from app.core.spaceterm import DisjSum, KSpace, OrdSpace, Plank, Prod, SpaceTerm, Triangle, TSpace, VecSum, XC
from app.core.strata import INF, Bound, Periodic, Strata, StrataSet
from app.parsers.lexer import NAME, NUM, TokenStream
from app.utils.error_handlers import SemanticError

_EPSILON = re.compile(r"e(\d+)$")


# Set syntax trees; evaluated once the ambient top is known


class SetNode:
    def reach(self) -> Ordinal:
        raise NotImplementedError

    def evaluate(self, top: Ordinal) -> StrataSet:
        raise NotImplementedError


@dataclass(frozen=True)
class IntervalNode(SetNode):
    a: Ordinal
    b: Ordinal

    def reach(self) -> Ordinal:
        return self.b

    def evaluate(self, top: Ordinal) -> StrataSet:
        return StrataSet.interval(top, self.a, self.b)


@dataclass(frozen=True)
class PointsNode(SetNode):
    points: Tuple[Ordinal, ...]

    def reach(self) -> Ordinal:
        return omax(ZERO, *self.points)

    def evaluate(self, top: Ordinal) -> StrataSet:
        return StrataSet.points_of(top, list(self.points))


@dataclass(frozen=True)
class StrataNode(SetNode):
    a: Ordinal
    b: Ordinal
    lo: Ordinal
    hi: Bound

    def reach(self) -> Ordinal:
        return self.b

    def evaluate(self, top: Ordinal) -> StrataSet:
        return StrataSet.build(top, [Strata(self.a, self.b, self.lo, self.hi)])


@dataclass(frozen=True)
class PeriodicNode(SetNode):
    base: Ordinal
    exponent: Ordinal
    width: int
    start: int
    pattern: SetNode

    def reach(self) -> Ordinal:
        return add(self.base, omega_pow(add(self.exponent, Ordinal.of(1))))

    def evaluate(self, top: Ordinal) -> StrataSet:
        step = mul(omega_pow(self.exponent), Ordinal.of(self.width))
        pattern = self.pattern.evaluate(step)
        return StrataSet.build(top, [Periodic(self.base, self.exponent, self.width, self.start, pattern)])


@dataclass(frozen=True)
class ClubNode(SetNode):
    generators: Tuple[Ordinal, ...]
    index: Optional[Ordinal] = None

    def spec(self):
        from app.core.construct import ClubSpec

        return ClubSpec.with_index(self.generators, self.index)

    def reach(self) -> Ordinal:
        return self.spec().top

    def evaluate(self, top: Ordinal) -> StrataSet:
        from app.core.construct import club_of_partial_sums

        return club_of_partial_sums(self.spec()).with_top(top)


@dataclass(frozen=True)
class BinaryNode(SetNode):
    op: str
    left: SetNode
    right: SetNode

    def reach(self) -> Ordinal:
        return omax(self.left.reach(), self.right.reach())

    def evaluate(self, top: Ordinal) -> StrataSet:
        a, b = self.left.evaluate(top), self.right.evaluate(top)
        if self.op == "|":
            return a.union(b)
        if self.op == "&":
            return a.intersect(b)
        return a.difference(b)


class ExpressionParser:
    """Recursive-descent parser over a shared token stream."""

    def __init__(self, source: str, normalize: bool = False, stream: Optional[TokenStream] = None):
        self.ts = stream or TokenStream(source)
        self.normalize = normalize

    # Ordinals

    def ordinal(self) -> Ordinal:
        start = self.ts.current.position
        value = self._ordinal_sum()
        if not self.normalize:
            end = self._last_end()
            written = re.sub(r"\s+", "", self.ts.source[start:end])
            canonical = to_str(value).replace(" ", "")
            if written != canonical:
                self.ts.fail(f"non-canonical ordinal {written!r}; canonical form is {to_str(value)!r}", start)
        return value

    def _last_end(self) -> int:
        token = self.ts.tokens[self.ts.index - 1]
        return token.position + len(token.text)

    def _ordinal_sum(self) -> Ordinal:
        total = self._ordinal_term()
        while self.ts.accept("+"):
            total = add(total, self._ordinal_term())
        return total

    def _ordinal_term(self) -> Ordinal:
        token = self.ts.current
        if token.kind == NUM:
            self.ts.advance()
            return Ordinal.of(int(token.text))
        if token.kind == NAME and token.text == "w":
            self.ts.advance()
            exponent = Ordinal.of(1)
            if self.ts.accept("^"):
                if self.ts.accept("("):
                    exponent = self._ordinal_sum()
                    self.ts.expect(")")
                else:
                    exponent = self._ordinal_atom()
            return self._coefficient(omega_pow(exponent))
        if token.kind == NAME and _EPSILON.match(token.text):
            self.ts.advance()
            return self._coefficient(self._epsilon(token))
        self.ts.fail(f"expected an ordinal, found {token}")

    def _ordinal_atom(self) -> Ordinal:
        token = self.ts.current
        if token.kind == NUM:
            self.ts.advance()
            return Ordinal.of(int(token.text))
        if token.kind == NAME and token.text == "w":
            self.ts.advance()
            return omega_pow(1)
        if token.kind == NAME and _EPSILON.match(token.text):
            self.ts.advance()
            return self._epsilon(token)
        self.ts.fail(f"expected an exponent, found {token}")

    def _epsilon(self, token) -> Ordinal:
        from app.config import config

        index = int(_EPSILON.match(token.text).group(1))
        if index >= config.epsilon_atoms:
            self.ts.fail(f"ε-atom e{index} is outside the notation (atoms e0..e{config.epsilon_atoms - 1})", token.position)
        return Ordinal.epsilon(index)

    def _coefficient(self, base: Ordinal) -> Ordinal:
        if self.ts.accept("*"):
            token = self.ts.expect_kind(NUM, "a natural coefficient")
            return mul(base, Ordinal.of(int(token.text)))
        return base

    def natural(self) -> int:
        return int(self.ts.expect_kind(NUM, "a natural number").text)

    def ordinal_list(self, separator: str = ",") -> List[Ordinal]:
        values = [self.ordinal()]
        while self.ts.accept(separator):
            values.append(self.ordinal())
        return values

    # Sets

    def set_expr(self) -> SetNode:
        node = self._set_meet()
        while self.ts.at("|") or self.ts.at("\\"):
            op = self.ts.advance().text
            node = BinaryNode(op, node, self._set_meet())
        return node

    def _set_meet(self) -> SetNode:
        node = self._set_primary()
        while self.ts.accept("&"):
            node = BinaryNode("&", node, self._set_primary())
        return node

    def _set_primary(self) -> SetNode:
        ts = self.ts
        if ts.accept("("):
            node = self.set_expr()
            ts.expect(")")
            return node
        if ts.accept("["):
            a = self.ordinal()
            ts.expect(",")
            b = self.ordinal()
            ts.expect("]")
            if compare(a, b) > 0:
                raise SemanticError(f"interval [{a},{b}] has its ends reversed")
            return IntervalNode(a, b)
        if ts.accept("{"):
            points: List[Ordinal] = []
            if not ts.at("}"):
                points = self.ordinal_list()
            ts.expect("}")
            return PointsNode(tuple(points))
        if ts.accept("strata"):
            ts.expect("(")
            a = self.ordinal()
            ts.expect(",")
            b = self.ordinal()
            ts.expect(",")
            lo = self.ordinal()
            ts.expect(",")
            hi: Bound = INF if ts.accept("inf") else self.ordinal()
            ts.expect(")")
            return StrataNode(a, b, lo, hi)
        if ts.accept("periodic"):
            ts.expect("(")
            base = self.ordinal()
            ts.expect(",")
            exponent = self.ordinal()
            ts.expect(",")
            width = self.natural()
            ts.expect(",")
            start = self.natural()
            ts.expect(",")
            pattern = self.set_expr()
            ts.expect(")")
            if width < 1:
                raise SemanticError("periodic width must be positive")
            return PeriodicNode(base, exponent, width, start, pattern)
        if ts.accept("club"):
            ts.expect("(")
            generators = self.ordinal_list()
            index = self.ordinal() if ts.accept(";") else None
            ts.expect(")")
            return ClubNode(tuple(generators), index)
        ts.fail(f"expected a set, found {ts.current}")

    # Terms

    def term(self) -> SpaceTerm:
        ts = self.ts
        token = ts.expect_kind(NAME, "a space term")
        name = token.text
        ts.expect("(")
        if name == "ord":
            result: SpaceTerm = OrdSpace(self.ordinal())
        elif name == "prod":
            left = self.term()
            ts.expect(",")
            result = Prod(left, self.term())
        elif name == "disj":
            left = self.term()
            ts.expect(",")
            result = DisjSum(left, self.term())
        elif name == "vecsum":
            rho = self.ordinal()
            bodies = []
            while ts.accept(","):
                bodies.append(self.term())
            if not bodies:
                ts.fail("vecsum needs at least one summand")
            result = VecSum(rho, tuple(bodies))
        elif name in ("T", "K", "tri"):
            theta = self.ordinal()
            result = {"T": TSpace, "K": KSpace, "tri": Triangle}[name](theta)
        elif name == "plank":
            alpha = self.ordinal()
            ts.expect(",")
            result = Plank(alpha, self.ordinal())
        elif name == "XC":
            node = self.set_expr()
            ts.expect(",")
            nu = self.ordinal()
            result = XC(node.evaluate(node.reach()), nu)
        else:
            ts.fail(f"unknown space term {name!r}", token.position)
        ts.expect(")")
        return result


def parse_ordinal(text: str, normalize: bool = False) -> Ordinal:
    parser = ExpressionParser(text, normalize)
    value = parser.ordinal()
    parser.ts.expect_end()
    return value


def parse_ordinal_list(text: str, normalize: bool = False) -> List[Ordinal]:
    parser = ExpressionParser(text, normalize)
    values = parser.ordinal_list()
    parser.ts.expect_end()
    return values


def evaluate_set(node: SetNode, top: Optional[Ordinal] = None) -> StrataSet:
    reach = node.reach()
    if top is None:
        return node.evaluate(reach)
    if compare(reach, top) > 0:
        raise SemanticError(f"set reaches {reach}, beyond the ambient top {top}", error_code="AMBIENT_MISMATCH")
    return node.evaluate(top)


def parse_set(text: str, top: Optional[Ordinal] = None, normalize: bool = False) -> StrataSet:
    """Parse a set expression; the ambient top defaults to the largest bound it mentions."""
    parser = ExpressionParser(text, normalize)
    node = parser.set_expr()
    parser.ts.expect_end()
    return evaluate_set(node, top)


def parse_term(text: str, normalize: bool = False) -> SpaceTerm:
    parser = ExpressionParser(text, normalize)
    term = parser.term()
    parser.ts.expect_end()
    return term
