import pytest

from app.core.ordinal import OMEGA, ONE, Ordinal, omega_pow
from app.core.spaceterm import (
    DisjSum,
    KSpace,
    OrdSpace,
    Plank,
    Prod,
    Triangle,
    TSpace,
    VecSum,
    end_point,
    explain_rank,
    instantiate,
    invariant_vector,
    is_unitary,
    oracle_rank,
    rank,
    separation_level,
    top_derivative_type,
    top_point_count,
)
from app.utils.error_handlers import UnsupportedTermError


class TestRankCalculus:
    @pytest.mark.parametrize(
        "term,expected",
        [
            (OrdSpace(omega_pow(2) * 3 + ONE), 2),
            (Prod(OrdSpace(OMEGA), OrdSpace(omega_pow(2))), 3),
            (Plank(omega_pow(2), OMEGA), 3),
            (KSpace(OMEGA), 2),
            (Triangle(omega_pow(2)), 4),
            (TSpace(omega_pow(3)), 3),
            (DisjSum(OrdSpace(OMEGA), OrdSpace(omega_pow(2))), 2),
        ],
    )
    def test_ranks(self, term, expected):
        assert rank(term) == Ordinal.of(expected)

    def test_vector_sum_rule(self):
        term = VecSum(omega_pow(3), (OrdSpace(omega_pow(2)),))
        assert rank(term) == Ordinal.of(5)
        assert explain_rank(term) == "vector-sum rule: 2 + 3"

    def test_finite_vector_sum_takes_the_max(self):
        term = VecSum(Ordinal.of(3), (OrdSpace(OMEGA), OrdSpace(omega_pow(2))))
        assert rank(term) == Ordinal.of(2)
        assert top_point_count(term) is None

    def test_length_must_be_indecomposable(self):
        with pytest.raises(UnsupportedTermError, match="not indecomposable"):
            rank(VecSum(OMEGA + 1, (OrdSpace(OMEGA),)))

    def test_infinite_sum_needs_equal_ranks(self):
        with pytest.raises(UnsupportedTermError) as exc_info:
            rank(VecSum(OMEGA, (OrdSpace(OMEGA), OrdSpace(omega_pow(2)))))
        assert exc_info.value.details["ranks"] == ["1", "2"]

    def test_explain_natural_sum(self):
        assert explain_rank(Plank(omega_pow(2), OMEGA)) == "natural sum: 2 ⊕ 1"

    def test_separation_level(self):
        assert separation_level(Ordinal.of(2)) == Ordinal.of(3)
        assert separation_level(OMEGA) == OMEGA
        assert separation_level(OMEGA + 1) == OMEGA * 2 + 1


class TestOracle:
    @pytest.mark.parametrize(
        "term",
        [
            OrdSpace(omega_pow(2)),
            Plank(omega_pow(2), OMEGA),
            KSpace(OMEGA),
            Triangle(OMEGA),
            TSpace(OMEGA),
            VecSum(omega_pow(3), (OrdSpace(omega_pow(2)),)),
            DisjSum(OrdSpace(OMEGA), OrdSpace(OMEGA)),
        ],
    )
    def test_oracle_agrees_with_calculus(self, term):
        assert oracle_rank(term) == rank(term)

    def test_products_of_non_intervals_are_not_instantiated(self):
        with pytest.raises(UnsupportedTermError):
            instantiate(Prod(KSpace(OMEGA), OrdSpace(OMEGA)))


class TestUnitarity:
    def test_top_point_counts(self):
        assert top_point_count(OrdSpace(OMEGA * 3)) == 3
        assert top_point_count(OrdSpace(Ordinal.of(4))) == 5
        assert top_point_count(Triangle(OMEGA * 2)) == 3
        assert top_point_count(KSpace(OMEGA * 2)) == 4
        assert top_point_count(TSpace(OMEGA)) == 1
        assert top_point_count(DisjSum(OrdSpace(omega_pow(2)), OrdSpace(omega_pow(2) * 2))) == 3

    def test_end_points(self):
        assert end_point(KSpace(omega_pow(2))) == "1_K = (w^2, w^2)"
        assert end_point(TSpace(OMEGA)) == "glued top w"
        assert end_point(VecSum(OMEGA, (OrdSpace(OMEGA),))) == "1_Y"
        assert end_point(OrdSpace(OMEGA * 2)) is None

    def test_unitary(self):
        assert is_unitary(Plank(OMEGA, OMEGA))
        assert not is_unitary(DisjSum(OrdSpace(OMEGA), OrdSpace(OMEGA)))


class TestShapes:
    def test_square_has_two_arms(self):
        shape = top_derivative_type(KSpace(omega_pow(2)))
        assert shape.kind == "cross"
        assert shape.level == Ordinal.of(3)
        assert str(shape) == "T(w)"

    def test_triangle_has_one_arm(self):
        shape = top_derivative_type(Triangle(omega_pow(2)))
        assert shape.kind == "chain"
        assert str(shape) == "chain(w + 1)"

    def test_square_and_triangle_are_told_apart(self):
        square, triangle = invariant_vector(KSpace(omega_pow(2))), invariant_vector(Triangle(omega_pow(2)))
        assert square.rank == triangle.rank
        assert square.differs(triangle)
        assert not square.differs(invariant_vector(Plank(omega_pow(2), omega_pow(2))))

    def test_unknown_slots_do_not_separate(self):
        unknown = invariant_vector(VecSum(OMEGA, (OrdSpace(OMEGA), OrdSpace(omega_pow(2)))))
        assert unknown.rank is None
        assert not unknown.differs(invariant_vector(KSpace(OMEGA)))
