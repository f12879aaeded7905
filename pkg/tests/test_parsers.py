import pytest

from app.core.ordinal import OMEGA, Ordinal, omega_pow
from app.core.region import Region
from app.core.strata import StrataSet
from app.parsers.documents import parse_poset_file, parse_region_file
from app.parsers.expressions import parse_ordinal, parse_ordinal_list, parse_set, parse_term
from app.core.spaceterm import OrdSpace, Plank, VecSum
from app.utils.error_handlers import EXIT_PARSE_ERROR, ParseError, SemanticError


class TestOrdinalLiterals:
    def test_canonical_literals(self):
        assert parse_ordinal("w^2*2 + w") == omega_pow(2) * 2 + OMEGA
        assert parse_ordinal("e0") == Ordinal.epsilon(0)
        assert parse_ordinal_list("1, w, w^2") == [Ordinal.of(1), OMEGA, omega_pow(2)]

    @pytest.mark.parametrize("text", ["w + w", "w^1", "3 + w", "w^2 + w^3"])
    def test_non_canonical_input_is_rejected(self, text):
        with pytest.raises(ParseError) as exc_info:
            parse_ordinal(text)
        assert "canonical form" in exc_info.value.message
        assert exc_info.value.exit_code == EXIT_PARSE_ERROR

    def test_normalize_accepts_any_sum(self):
        assert parse_ordinal("w + w", normalize=True) == OMEGA * 2
        assert parse_ordinal("3 + w", normalize=True) == OMEGA
        assert parse_ordinal("w^2 + w^3", normalize=True) == omega_pow(3)

    def test_epsilon_outside_notation(self):
        with pytest.raises(ParseError, match="outside the notation"):
            parse_ordinal("e9")

    def test_error_points_at_column(self):
        with pytest.raises(ParseError) as exc_info:
            parse_ordinal("w^2 $")
        assert exc_info.value.position == 4
        assert "^" in exc_info.value.render()

    def test_trailing_input(self):
        with pytest.raises(ParseError, match="after complete expression"):
            parse_ordinal("w w")


class TestSetExpressions:
    def test_top_defaults_to_largest_bound(self):
        s = parse_set("[0,w] | {w^2}")
        assert s.top == omega_pow(2)
        assert s.contains(OMEGA) and s.contains(omega_pow(2))
        assert not s.contains(OMEGA + 1)

    def test_difference_and_meet(self, w):
        s = parse_set("[0,w] \\ {w}")
        assert s.same_as(StrataSet.below(w, w))
        assert parse_set("[0,w] & {3, 5}").points() == [Ordinal.of(3), Ordinal.of(5)]

    def test_strata_literal(self, w2):
        limits = parse_set("strata(w,w^2,1,inf)")
        assert limits.same_as(StrataSet.full(w2).derivative())

    def test_reversed_interval(self):
        with pytest.raises(SemanticError):
            parse_set("[w,3]")

    def test_explicit_top_must_cover_the_set(self):
        with pytest.raises(SemanticError) as exc_info:
            parse_set("[0,w^2]", top=OMEGA)
        assert exc_info.value.error_code == "AMBIENT_MISMATCH"


class TestTerms:
    def test_nested_terms(self):
        term = parse_term("vecsum(w^3, ord(w^2))")
        assert isinstance(term, VecSum)
        assert term.bodies == (OrdSpace(omega_pow(2)),)
        assert parse_term("plank(w^2, w)") == Plank(omega_pow(2), OMEGA)

    def test_unknown_term(self):
        with pytest.raises(ParseError, match="unknown space term"):
            parse_term("blob(w)")

    def test_vecsum_needs_summands(self):
        with pytest.raises(ParseError):
            parse_term("vecsum(w)")


class TestDocuments:
    def test_square_sample(self, sample, w2):
        with open(sample("square.region")) as handle:
            region = parse_region_file(handle.read())
        assert region.same_as(Region.full((w2, w2)))

    def test_triangle_sample(self, sample):
        with open(sample("triangle.region")) as handle:
            region = parse_region_file(handle.read())
        assert region.contains((OMEGA, omega_pow(2)))
        assert not region.contains((omega_pow(2), OMEGA))

    def test_error_reports_line(self):
        text = "# header\nambient w w\nbox [0,w] y [0,w]\n"
        with pytest.raises(ParseError) as exc_info:
            parse_region_file(text)
        assert exc_info.value.message.startswith("line 3:")
        assert exc_info.value.details["line"] == 3

    def test_empty_region_file(self):
        with pytest.raises(ParseError, match="empty region file"):
            parse_region_file("# nothing here\n")

    def test_poset_sample(self, sample):
        with open(sample("diamond.poset")) as handle:
            poset = parse_poset_file(handle.read())
        assert poset.labels == ("bot", "a", "b", "top")
        assert poset.lt[poset.index("bot"), poset.index("top")]
        assert not poset.lt[poset.index("a"), poset.index("b")]

    def test_poset_default_labels(self):
        poset = parse_poset_file("poset 2\n0 < 1\n")
        assert poset.labels == ("0", "1")

    def test_poset_cycle(self):
        with pytest.raises(SemanticError, match="cycle"):
            parse_poset_file("poset 2\n0 < 1\n1 < 0\n")
