import numpy as np
import pytest

from app.core.duality import (
    FinBooleanAlgebra,
    FinDistLattice,
    FinPoset,
    check_universal_property,
    count_antichains,
    disjoint_sum,
    enumerate_posets,
    final_segments,
    free_boolean_algebra,
    glued_sum,
    induced_embedding,
    is_isomorphic,
    lattices_isomorphic,
    lex_sum,
    prime_filters,
    product,
)
from app.parsers.documents import parse_poset_file
from app.utils.error_handlers import SemanticError, SizeGuardError


@pytest.fixture
def vee():
    return FinPoset.from_relations(["a", "b", "c"], [("a", "b"), ("a", "c")])


@pytest.fixture
def diamond(sample):
    with open(sample("diamond.poset")) as handle:
        return parse_poset_file(handle.read())


class TestPosets:
    def test_transitive_closure(self):
        p = FinPoset.from_relations(["x", "y", "z"], [("x", "y"), ("y", "z")])
        assert p.lt[p.index("x"), p.index("z")]
        assert p.cover_pairs() == [("x", "y"), ("y", "z")]

    def test_rejects_non_transitive_matrix(self):
        lt = np.zeros((3, 3), dtype=bool)
        lt[0, 1] = lt[1, 2] = True
        with pytest.raises(SemanticError, match="not transitive"):
            FinPoset(["a", "b", "c"], lt)

    def test_antichain_count(self, vee, diamond):
        assert count_antichains(vee) == 5
        assert count_antichains(diamond) == 6
        assert count_antichains(FinPoset.antichain(3)) == 8

    @pytest.mark.parametrize("n,expected", [(0, 1), (1, 1), (2, 3), (3, 19), (4, 219)])
    def test_labeled_enumeration(self, n, expected):
        assert sum(1 for _ in enumerate_posets(n)) == expected

    def test_isomorphism_ignores_labels(self, vee):
        relabeled = FinPoset.from_relations(["z", "y", "x"], [("x", "z"), ("x", "y")])
        assert is_isomorphic(vee, relabeled)
        assert not is_isomorphic(vee, vee.dual())

    def test_size_guard(self):
        with pytest.raises(SizeGuardError):
            FinPoset.antichain(17).up_set_masks


class TestRoundTrip:
    @pytest.mark.parametrize("poset", [FinPoset.chain(3), FinPoset.antichain(2), FinPoset.empty()])
    def test_prime_filters_recover_the_poset(self, poset):
        assert is_isomorphic(prime_filters(final_segments(poset)), poset)

    def test_diamond(self, diamond):
        fs = final_segments(diamond)
        assert fs.size == 6
        assert is_isomorphic(prime_filters(fs), diamond)

    def test_segment_order_is_reversed_inclusion(self):
        fs = final_segments(FinPoset.chain(2))
        assert fs.labels[fs.bottom] == "{c0,c1}"
        assert fs.labels[fs.top] == "{}"

    def test_join_irreducibles_of_chain(self):
        assert len(final_segments(FinPoset.chain(4)).join_irreducibles) == 4


class TestLattices:
    def test_non_distributive_lattice(self):
        # M3: bottom, three atoms, top
        leq = np.eye(5, dtype=bool)
        leq[0, :] = True
        leq[:, 4] = True
        with pytest.raises(SemanticError) as exc_info:
            FinDistLattice(["0", "x", "y", "z", "1"], leq)
        assert exc_info.value.error_code == "NOT_DISTRIBUTIVE"

    def test_missing_bound(self):
        leq = np.eye(2, dtype=bool)
        with pytest.raises(SemanticError) as exc_info:
            FinDistLattice(["p", "q"], leq)
        assert exc_info.value.error_code == "NOT_A_LATTICE"

    def test_disjoint_sum_gives_product(self, vee):
        chain = FinPoset.chain(2)
        assert lattices_isomorphic(
            final_segments(disjoint_sum(vee, chain)),
            product(final_segments(vee), final_segments(chain)),
        )

    def test_ordered_sum_gives_glued_sum(self, vee):
        chain = FinPoset.chain(2)
        stacked = lex_sum(FinPoset.chain(2, prefix="i"), [vee, chain])
        glued = glued_sum(final_segments(vee), final_segments(chain))
        assert glued.size == 7
        assert lattices_isomorphic(final_segments(stacked), glued)

    def test_glued_chains(self):
        one = final_segments(FinPoset.chain(1))
        assert lattices_isomorphic(glued_sum(one, one), final_segments(FinPoset.chain(2)))

    def test_lattice_dict(self):
        fs = final_segments(FinPoset.chain(1))
        data = fs.to_dict()
        assert data["bottom"] == "{c0}"
        assert data["join"][0][1] == "{}"


class TestMaps:
    def test_surjection_induces_embedding(self):
        p, q = FinPoset.chain(2), FinPoset.chain(1)
        result = induced_embedding(p, q, {0: 0, 1: 0})
        assert result.is_embedding
        assert len(result.mapping) == 2

    def test_map_must_be_monotone(self):
        p, q = FinPoset.chain(2), FinPoset.chain(2)
        with pytest.raises(SemanticError, match="order-preserving"):
            induced_embedding(p, q, {0: 1, 1: 0})


class TestFreeBooleanAlgebra:
    def test_embedding(self, vee):
        free = free_boolean_algebra(vee)
        assert free.size == 32
        assert free.is_order_embedding()

    @pytest.mark.parametrize("size", [1, 2, 4, 8])
    def test_universal_property(self, size):
        assert check_universal_property(FinPoset.chain(2), FinBooleanAlgebra.of_size(size))

    def test_algebra_size_must_be_a_power_of_two(self):
        with pytest.raises(SemanticError):
            FinBooleanAlgebra.of_size(6)

    def test_universal_size_guard(self):
        with pytest.raises(SizeGuardError):
            check_universal_property(FinPoset.antichain(3), FinBooleanAlgebra.of_size(2))
