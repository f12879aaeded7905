from itertools import combinations

import pytest

from app.core.ordinal import OMEGA, ONE, ZERO, Ordinal, omega_pow, rank_of_ordinal_space
from app.core.strata import INF, Strata, StrataSet, predecessor
from app.parsers.expressions import parse_set
from app.utils.error_handlers import AmbientMismatchError, SemanticError


@pytest.fixture
def square_side(w2):
    return StrataSet.full(w2)


class TestBooleanOperations:
    def test_interval_parses_to_full(self, w):
        assert parse_set("[0,w]").same_as(StrataSet.full(w))

    def test_union_and_difference(self, w):
        evens = StrataSet.points_of(w, [Ordinal.of(0), Ordinal.of(2)])
        odds = StrataSet.points_of(w, [Ordinal.of(1), Ordinal.of(3)])
        both = evens.union(odds)
        assert both.points() == [Ordinal.of(k) for k in range(4)]
        assert both.difference(odds).same_as(evens)
        assert evens.intersect(odds).is_empty

    def test_ambients_must_agree(self, w, w2):
        with pytest.raises(AmbientMismatchError):
            StrataSet.full(w).union(StrataSet.full(w2))

    def test_minimum_and_supremum(self, w, w2):
        s = StrataSet.below(w2, w2)
        assert s.minimum() == ZERO
        assert s.supremum() == (w2, False)
        assert StrataSet.full(w).supremum() == (w, True)
        with pytest.raises(SemanticError):
            StrataSet.empty(w).minimum()


class TestTopology:
    def test_derivative_keeps_limit_points(self, square_side, w, w2):
        limits = StrataSet.build(w2, [Strata(w, w2, ONE, INF)])
        assert square_side.derivative().same_as(limits)

    def test_isolated_points_of_successor_interval(self, w):
        assert StrataSet.full(w).isolated_points().same_as(StrataSet.below(w, w))

    def test_closure_adds_the_missing_limit(self, w2):
        open_interval = StrataSet.below(w2, OMEGA)
        assert not open_interval.is_closed()
        assert open_interval.closure().same_as(StrataSet.interval(w2, ZERO, OMEGA))

    def test_closed_form_derivative_agrees_with_iteration(self, w3):
        s = StrataSet.full(w3)
        closed = s.derivative_alpha(Ordinal.of(2))
        assert closed.same_as(s.derivative().derivative())
        assert closed.same_as(StrataSet.build(w3, [Strata(omega_pow(2), w3, Ordinal.of(2), INF)]))


class TestRanks:
    def test_point_rank_is_last_exponent_inside_full_interval(self, square_side, w2):
        assert square_side.point_rank(Ordinal.of(5)) == ZERO
        assert square_side.point_rank(OMEGA * 3) == ONE
        assert square_side.point_rank(w2) == Ordinal.of(2)

    def test_point_rank_outside_the_set(self, w):
        with pytest.raises(SemanticError):
            StrataSet.points_of(w, [ONE]).point_rank(ZERO)

    def test_cb_rank_and_unitarity(self, square_side, w2):
        assert square_side.cb_rank() == Ordinal.of(2)
        assert square_side.is_unitary()
        assert square_side.end_point() == w2

    def test_two_top_points_are_not_unitary(self):
        s = parse_set("[0,w*2]")
        assert s.rank_info() == (ONE, True)
        assert not s.is_unitary()
        assert s.end_point() is None

    def test_rank_of_empty_set_is_undefined(self, w):
        with pytest.raises(SemanticError):
            StrataSet.empty(w).cb_rank()


class TestOrderType:
    def test_full_interval(self, w, w2):
        assert StrataSet.full(w).order_type() == OMEGA + 1
        assert StrataSet.interval(w2, OMEGA, w2).order_type() == w2 + 1

    def test_finite_sets(self, w):
        s = StrataSet.points_of(w, [ONE, Ordinal.of(3), w])
        assert s.is_finite()
        assert s.order_type() == Ordinal.of(3)

    def test_predecessor_of_successor(self, w):
        assert predecessor(OMEGA + 1) == OMEGA
        assert predecessor(Ordinal.of(4)) == Ordinal.of(3)


class TestRanksOfIntervalsWithZero:
    @pytest.mark.parametrize(
        "text,expected",
        [
            ("[0,w^2*3 + w]", Ordinal.of(2)),
            ("[0,w^w]", OMEGA),
            ("[0,e0]", Ordinal.epsilon(0)),
            ("[0,w*2]", ONE),
            ("[0,7]", ZERO),
        ],
    )
    def test_cb_rank(self, text, expected):
        assert parse_set(text).cb_rank() == expected

    def test_single_zero_is_unitary(self, w):
        zero = StrataSet.points_of(w, [ZERO])
        assert zero.cb_rank() == ZERO
        assert zero.is_unitary()
        assert zero.end_point() == ZERO

    def test_zero_does_not_change_the_rank(self, w2):
        s = StrataSet.points_of(w2, [ZERO]).union(StrataSet.interval(w2, OMEGA, w2))
        assert s.cb_rank() == Ordinal.of(2)
        assert s.end_point() == w2

    @pytest.mark.parametrize("top", ["1", "w", "w + 5", "w^2*2", "w^(w + 1)", "e1*2 + w"])
    def test_rank_of_interval_is_rank_of_ordinal_space(self, top):
        interval = parse_set(f"[0,{top}]")
        assert interval.cb_rank() == rank_of_ordinal_space(interval.top)


CORPUS = [
    "[0,w^3]",
    "[w,w^2]",
    "strata(0,w^3,1,inf)",
    "{0, w, w^2}",
    "[w^2,w^2*3]",
    "strata(w,w^3,0,2)",
    "[0,w*5] | {w^2}",
    "[0,w^2] \\ strata(0,w^2,1,2)",
]


@pytest.fixture
def corpus(w3):
    return [parse_set(text, top=w3) for text in CORPUS]


class TestSetLaws:
    def test_union_and_intersection_commute(self, corpus):
        for s, t in combinations(corpus, 2):
            assert s.union(t).same_as(t.union(s))
            assert s.intersect(t).same_as(t.intersect(s))

    def test_difference_is_intersection_with_complement(self, corpus):
        for s, t in combinations(corpus, 2):
            assert s.difference(t).same_as(s.intersect(t.complement()))

    def test_de_morgan(self, corpus):
        for s, t in combinations(corpus, 2):
            assert s.union(t).complement().same_as(s.complement().intersect(t.complement()))

    def test_complement_is_an_involution(self, corpus):
        for s in corpus:
            assert s.complement().complement().same_as(s)

    def test_accumulation_ignores_closure(self, corpus):
        for s in corpus:
            assert s.acc().same_as(s.closure().acc())
            assert s.closure().closure().same_as(s.closure())

    def test_accumulation_distributes_over_union(self, corpus):
        for s, t in combinations(corpus, 2):
            assert s.union(t).acc().same_as(s.acc().union(t.acc()))

    def test_derivative_is_monotone(self, corpus):
        for s, t in combinations(corpus, 2):
            both = s.union(t)
            assert s.derivative().issubset(both.derivative())
            assert t.derivative().issubset(both.derivative())

    def test_derivative_of_closed_union(self, corpus):
        for s, t in combinations(corpus, 2):
            a, b = s.closure(), t.closure()
            assert a.union(b).derivative().same_as(a.derivative().union(b.derivative()))
