import pytest

from app.core.ordinal import OMEGA, ONE, ZERO, Ordinal
from app.core.region import GE, TRI, Piece, Region, lattice_closure
from app.core.strata import StrataSet
from app.parsers.documents import parse_region_file
from app.utils.error_handlers import AmbientMismatchError, SemanticError


def _read(path):
    with open(path) as handle:
        return parse_region_file(handle.read())


@pytest.fixture
def square(w):
    return Region.full((w, w))


class TestMembership:
    def test_triangle_relation(self, w2):
        tri = Region.tri(StrataSet.full(w2), StrataSet.full(w2))
        assert tri.contains((ONE, OMEGA))
        assert tri.contains((OMEGA, OMEGA))
        assert not tri.contains((OMEGA, ONE))

    def test_transpose_flips_the_relation(self, w2):
        tri = Region.tri(StrataSet.full(w2), StrataSet.full(w2)).transpose()
        assert tri.pieces[0].rel == GE
        assert tri.contains((OMEGA, ONE))

    def test_difference_of_boxes(self, square, w):
        corner = Region.box(StrataSet.points_of(w, [w]), StrataSet.points_of(w, [w]))
        rest = square.difference(corner)
        assert not rest.contains((w, w))
        assert rest.contains((w, ZERO))
        assert rest.union(corner).same_as(square)

    def test_ambients_must_agree(self, square, w2):
        with pytest.raises(AmbientMismatchError):
            square.union(Region.full((w2, w2)))

    def test_finite_points(self):
        three = Ordinal.of(3)
        region = Region.points_of((three, three), [(ONE, ZERO), (ZERO, ONE)])
        assert region.is_finite()
        assert region.points() == [(ZERO, ONE), (ONE, ZERO)]


class TestRanks:
    def test_square_of_omega(self, square):
        result = square.cb_rank_finite()
        assert result.known
        assert result.value == Ordinal.of(2)
        assert result.path == "iteration"

    def test_plank_rank_is_natural_sum(self, w2, w):
        assert Region.box(StrataSet.full(w2), StrataSet.full(w)).cb_rank_finite().value == Ordinal.of(3)

    def test_triangle_rank(self, w2):
        tri = Region.tri(StrataSet.full(w2), StrataSet.full(w2))
        assert tri.cb_rank_finite().value == Ordinal.of(4)

    def test_point_ranks(self, square, w):
        assert square.point_rank((w, w)).value == Ordinal.of(2)
        assert square.point_rank((w, Ordinal.of(3))).value == ONE
        assert square.point_rank((ONE, ONE)).value == ZERO

    def test_point_outside(self, square, w):
        line = square.difference(Region.box(StrataSet.points_of(w, [w]), StrataSet.full(w)))
        with pytest.raises(SemanticError):
            line.point_rank((w, ZERO))

    def test_rank_beyond_the_bound_is_unknown(self, w):
        deep = Region.full((w, w))
        result = deep.cb_rank_finite(bound=1)
        assert not result.known
        assert str(result) == "unknown"
        assert result.residue is not None

    def test_empty_region(self, w):
        with pytest.raises(SemanticError):
            Region.empty((w, w)).cb_rank_finite()


class TestTopology:
    def test_boxes_of_closed_sets_are_closed(self, square):
        assert square.is_closed()

    def test_open_strip_is_not_closed(self, w):
        strip = Region.box(StrataSet.below(w, w), StrataSet.full(w))
        assert not strip.is_closed()
        assert strip.closure().same_as(Region.full((w, w)))

    def test_derivative_of_square(self, square, w):
        limits = StrataSet.full(w).derivative()
        expected = Region.box(limits, StrataSet.full(w)).union(Region.box(StrataSet.full(w), limits))
        assert square.derivative().same_as(expected)


class TestLattice:
    def test_square_and_triangle_are_sublattices(self, sample):
        assert _read(sample("square.region")).is_sublattice()
        assert _read(sample("triangle.region")).is_sublattice()

    def test_cross_is_not_a_sublattice(self, sample):
        cross = _read(sample("cross.region"))
        assert cross.is_closed()
        assert not cross.is_sublattice()

    def test_lattice_closure_of_antichain(self):
        one = ONE
        closed = lattice_closure([(ZERO, one), (one, ZERO)], (one, one))
        assert set(closed.points()) == {(ZERO, ZERO), (ZERO, one), (one, ZERO), (one, one)}
        assert closed.is_sublattice()

    def test_finite_non_lattice(self):
        one = ONE
        region = Region.points_of((one, one), [(ZERO, one), (one, ZERO)])
        assert not region.is_sublattice()

    def test_sections_and_projections(self, w2):
        tri = Region.build((w2, w2), [Piece(StrataSet.full(w2), StrataSet.full(w2), TRI)])
        assert tri.section_x(OMEGA).same_as(StrataSet.interval(w2, ZERO, OMEGA))
        assert tri.section_y(OMEGA).same_as(StrataSet.interval(w2, OMEGA, w2))
        assert tri.project_x().same_as(StrataSet.full(w2))


def test_derivative_chains_are_reused(fresh_cache, square):
    square.cb_rank_finite()
    square.point_rank((OMEGA, OMEGA))
    stats = fresh_cache.get_stats()
    assert stats["misses"] == 1
    assert stats["hits"] >= 1
