import pytest

from app.core.classify import (
    COUNTABLE,
    FULL_SQUARE,
    ORDINAL_SPACE,
    PLANK,
    TRIANGLE,
    UNKNOWN,
    UNKNOWN_LABEL,
    ClassLabel,
    algebra_label,
    bounded_plank_decomposition,
    case_one_parts,
    classify,
    combine,
    countable_label,
    rectangle_decomposition,
    rectangle_selftest,
)
from app.core.ordinal import OMEGA, ONE, ZERO, Ordinal, omega_pow
from app.core.region import Region
from app.core.strata import StrataSet
from app.parsers.documents import parse_region_file
from app.parsers.expressions import parse_ordinal, parse_set
from app.utils.error_handlers import SemanticError


def _read(path):
    with open(path) as handle:
        return parse_region_file(handle.read())


class TestLabels:
    def test_printing(self):
        assert str(ClassLabel(PLANK, OMEGA)) == "Plank(w)"
        assert str(ClassLabel(FULL_SQUARE)) == "FullSquare"

    @pytest.mark.parametrize(
        "label,algebra",
        [
            (ClassLabel(ORDINAL_SPACE), "F(ω₁)"),
            (ClassLabel(FULL_SQUARE), "F(ω₁⊎ω₁)"),
            (ClassLabel(PLANK, OMEGA), "F(ω₁⊎ω)"),
            (ClassLabel(TRIANGLE), "F(ω₁×2)"),
            (ClassLabel(COUNTABLE, omega_pow(2)), "F(ω²)"),
            (UNKNOWN_LABEL, "unknown"),
        ],
    )
    def test_algebra_labels(self, label, algebra):
        assert algebra_label(label) == algebra

    def test_combine(self):
        assert combine(ClassLabel(PLANK, ONE), ClassLabel(PLANK, OMEGA)) == ClassLabel(PLANK, OMEGA)
        assert combine(ClassLabel(ORDINAL_SPACE), ClassLabel(ORDINAL_SPACE)) == ClassLabel(PLANK, ONE)
        assert combine(ClassLabel(COUNTABLE, OMEGA), ClassLabel(PLANK, Ordinal.of(2))) == ClassLabel(PLANK, Ordinal.of(2))
        assert combine(ClassLabel(FULL_SQUARE), ClassLabel(PLANK, OMEGA)) == ClassLabel(FULL_SQUARE)
        assert combine(ClassLabel(COUNTABLE, ONE), ClassLabel(COUNTABLE, Ordinal.of(2))) == ClassLabel(COUNTABLE, Ordinal.of(4))
        assert combine(UNKNOWN_LABEL, ClassLabel(ORDINAL_SPACE)) == UNKNOWN_LABEL

    def test_plank_parameter_is_canonical(self):
        assert combine(ClassLabel(ORDINAL_SPACE), ClassLabel(PLANK, OMEGA)) == ClassLabel(PLANK, OMEGA)

    def test_countable_label_from_rank_and_degree(self, w):
        assert countable_label(Region.full((w, w))) == ClassLabel(COUNTABLE, omega_pow(2))
        three = Ordinal.of(3)
        pair = Region.points_of((three, three), [(ZERO, ZERO), (ONE, ONE)])
        assert countable_label(pair) == ClassLabel(COUNTABLE, ONE)


class TestRectangleIdentity:
    def test_square(self, w):
        a, b = rectangle_decomposition(Region.full((w, w)), ZERO, w, ZERO, w)
        assert a.same_as(StrataSet.full(w))
        assert b.same_as(StrataSet.full(w))

    def test_corners_out_of_order(self, w):
        with pytest.raises(SemanticError) as exc_info:
            rectangle_decomposition(Region.full((w, w)), w, ZERO, ZERO, w)
        assert exc_info.value.error_code == "BAD_RECTANGLE"

    def test_cross_fails_the_identity(self, sample, w2):
        cross = _read(sample("cross.region"))
        with pytest.raises(SemanticError) as exc_info:
            rectangle_decomposition(cross, ZERO, w2, ZERO, w2)
        assert exc_info.value.error_code == "NOT_SUBLATTICE"

    def test_random_lattices(self):
        assert rectangle_selftest(cases=50, seed=3) == []


class TestBoundedPlank:
    def test_plank_of_height_omega(self, w, w2):
        k = Region.box(StrataSet.full(w2), StrataSet.interval(w2, ZERO, w))
        result = bounded_plank_decomposition(k, w, w2)
        assert result.label == ClassLabel(PLANK, w)
        assert result.rectangle[1:] == (w2, ZERO, w)

    def test_rows_bounded_below_the_top(self, w, w2):
        k = Region.box(StrataSet.interval(w2, ZERO, w), StrataSet.interval(w2, ZERO, w))
        assert bounded_plank_decomposition(k, w, w2).label.kind == COUNTABLE

    def test_theta_must_lie_below_the_top(self, w2):
        with pytest.raises(SemanticError) as exc_info:
            bounded_plank_decomposition(Region.full((w2, w2)), w2, w2)
        assert exc_info.value.error_code == "NOT_BOUNDED"


class TestClassify:
    def test_square(self, sample):
        result = classify(_read(sample("square.region")))
        assert result.label.kind == FULL_SQUARE
        assert result.case == 1
        assert result.algebra == "F(ω₁⊎ω₁)"
        assert result.matches
        assert result.measured["arms"] == "2"

    def test_triangle(self, sample):
        result = classify(_read(sample("triangle.region")))
        assert result.label.kind == TRIANGLE
        assert result.case == 3
        assert result.matches
        assert result.measured["arms"] == "1"

    def test_plank(self, sample):
        result = classify(_read(sample("plank.region")))
        assert str(result.label) == "Plank(w)"
        assert result.omega == omega_pow(3)
        assert result.matches

    def test_cross_is_rejected(self, sample):
        with pytest.raises(SemanticError) as exc_info:
            classify(_read(sample("cross.region")))
        assert exc_info.value.error_code == "NOT_SUBLATTICE"

    def test_top_must_be_indecomposable(self, sample):
        with pytest.raises(SemanticError) as exc_info:
            classify(_read(sample("square.region")), omega=OMEGA * 2)
        assert exc_info.value.error_code == "BAD_TOP"

    def test_open_region_is_rejected(self, w):
        strip = Region.box(StrataSet.below(w, w), StrataSet.full(w))
        with pytest.raises(SemanticError) as exc_info:
            classify(strip)
        assert exc_info.value.error_code == "NOT_CLOSED"

    def test_bottom_row(self, w2):
        row = Region.box(StrataSet.full(w2), StrataSet.points_of(w2, [ZERO]))
        assert classify(row).label.kind == ORDINAL_SPACE

    def test_rows_at_limit_heights(self, w, w2):
        # the limit rows of [0,w^2] form a copy of [0,w], not of [0,w^2]
        k = Region.box(StrataSet.full(w2), parse_set("strata(0,w^2,1,inf)", top=w2))
        result = classify(k)
        assert result.label == ClassLabel(PLANK, w)
        assert result.matches
        assert result.predicted["rank"] == result.measured["rank"] == "3"
        assert "region is a rectangle, labeled by the order types of its sides" in result.notes


class TestSidesCofinalInTop:
    def test_sparse_rows_are_not_a_plank(self, w, w2):
        k = Region.box(parse_set("strata(0,w^2,1,inf)", top=w2), StrataSet.interval(w2, ZERO, w))
        result = bounded_plank_decomposition(k, w, w2)
        assert result.label.kind == UNKNOWN
        assert result.notes[-1] == "cofinal rows have order type w + 1, not w^2 + 1"

    def test_thinned_square_is_not_a_full_square(self, w2):
        limits = parse_set("strata(0,w^2,1,inf)", top=w2)
        result = classify(Region.box(limits, limits))
        assert result.label == UNKNOWN_LABEL
        assert not result.matches


class TestCaseOneParts:
    @pytest.mark.parametrize("delta", ["0", "5", "w", "w*3 + 1"])
    def test_parts_partition_the_region(self, sample, delta):
        k = _read(sample("square.region"))
        w2 = k.ambient[0]
        u, v, w = case_one_parts(k, w2, parse_ordinal(delta))
        for p, q in ((u, v), (u, w), (v, w)):
            assert p.intersect(q).is_empty
        assert u.union(v).union(w).same_as(k)

    def test_parts_of_a_plank_with_a_whisker(self, w, w2):
        k = Region.box(StrataSet.full(w2), StrataSet.interval(w2, ZERO, w)).union(
            Region.box(StrataSet.points_of(w2, [w2]), StrataSet.full(w2))
        )
        u, v, upper = case_one_parts(k, w2, w)
        assert u.same_as(Region.box(StrataSet.full(w2), StrataSet.interval(w2, ZERO, w)))
        assert v.is_empty
        assert upper.same_as(Region.box(StrataSet.points_of(w2, [w2]), StrataSet.above(w2, w)))
        assert u.union(v).union(upper).same_as(k)
