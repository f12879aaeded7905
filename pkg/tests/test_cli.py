import json

import pytest

from main import main
from app.utils.error_handlers import EXIT_OK, EXIT_PARSE_ERROR, EXIT_SEMANTIC_ERROR, EXIT_SUITE_FAILURE


def _run(capsys, *argv):
    status = main(list(argv))
    captured = capsys.readouterr()
    return status, captured.out.strip().splitlines(), captured.err


class TestOrdinalCommands:
    def test_eval_normalizes(self, capsys):
        status, out, _ = _run(capsys, "ord", "eval", "w + w")
        assert status == EXIT_OK
        assert out == ["w*2"]

    def test_cmp(self, capsys):
        assert _run(capsys, "ord", "cmp", "w", "w^2")[1] == ["less"]
        assert _run(capsys, "--normalize", "ord", "cmp", "w + w", "w*2")[1] == ["equal"]

    def test_non_canonical_literal(self, capsys):
        status, _, err = _run(capsys, "ord", "cmp", "w + w", "w")
        assert status == EXIT_PARSE_ERROR
        assert "PARSE_ERROR" in err

    def test_epsilon_override(self, capsys):
        assert _run(capsys, "--eps", "2", "ord", "eval", "e3")[0] == EXIT_PARSE_ERROR
        assert _run(capsys, "ord", "eval", "e3")[0] == EXIT_OK

    def test_json_output(self, capsys):
        status, out, _ = _run(capsys, "--format", "json", "ord", "eval", "w^2 + w^2")
        assert status == EXIT_OK
        document = json.loads("\n".join(out))
        assert document["command"] == "ord eval"
        assert document["results"] == {"value": "w^2*2", "unicode": "ω²·2"}
        assert document["provenance"][0]["path"] == "symbolic"


class TestArgumentErrors:
    def test_unknown_group(self, capsys):
        assert _run(capsys, "bogus")[0] == EXIT_PARSE_ERROR

    def test_missing_argument(self, capsys):
        assert _run(capsys, "region", "rank")[0] == EXIT_PARSE_ERROR

    def test_help(self, capsys):
        assert _run(capsys, "--help")[0] == EXIT_OK


class TestSetAndRegionCommands:
    def test_set_rank(self, capsys):
        assert _run(capsys, "set", "rank", "[0,w^2]")[1] == ["2 (closed form; oracle: 2)"]

    def test_set_point_rank(self, capsys):
        assert _run(capsys, "set", "rank", "[0,w^2]", "--point", "w*3")[1] == ["1 (closed form; oracle: 1)"]

    def test_set_order_type(self, capsys):
        assert _run(capsys, "set", "ot", "[w,w^2]")[1] == ["w^2 + 1"]

    def test_region_rank(self, capsys, sample):
        assert _run(capsys, "region", "rank", "--region", sample("square.region"))[1] == ["4 (oracle: iteration)"]

    def test_region_point_rank(self, capsys, sample):
        out = _run(capsys, "region", "pointrank", "--region", sample("square.region"), "--point", "w,w^2")[1]
        assert out == ["3 (oracle: iteration)"]

    def test_missing_file(self, capsys, tmp_path):
        status, _, err = _run(capsys, "region", "rank", "--region", str(tmp_path / "nope.region"))
        assert status == EXIT_SEMANTIC_ERROR
        assert "FILE_NOT_FOUND" in err


class TestTermCommands:
    def test_rank_line(self, capsys):
        status, out, _ = _run(capsys, "term", "rank", "vecsum(w^3, ord(w^2))")
        assert status == EXIT_OK
        assert out == ["5 (vector-sum rule: 2 + 3; oracle: 5)"]

    def test_unsupported_term(self, capsys):
        status, _, err = _run(capsys, "term", "rank", "vecsum(w + 1, ord(w))")
        assert status == EXIT_SEMANTIC_ERROR
        assert "UNSUPPORTED" in err

    def test_invariants(self, capsys):
        out = _run(capsys, "term", "invariants", "K(w^2)")[1]
        assert out == ["(4, unitary, T(w))", "end point: 1_K = (w^2, w^2)"]


class TestOtherGroups:
    def test_partial_sums(self, capsys):
        out = _run(capsys, "construct", "sums", "--A", "w,w^2", "-n", "4")[1]
        assert out == ["w", "w^2", "w^2 + w", "w^2*2"]

    def test_xc_from_generators_matches_club_expression(self, capsys):
        from_generators = _run(capsys, "construct", "xc", "--A", "w,w^2", "--nu", "w")
        from_club = _run(capsys, "construct", "xc", "--club", "club(w,w^2)", "--nu", "w")
        assert from_generators[:2] == from_club[:2]
        assert "spectrum: {1,2}" in from_generators[1]

    def test_xc_index_and_schedule(self, capsys):
        status, out, _ = _run(capsys, "--format", "json", "construct", "xc", "--A", "w,w^2", "--index", "w*3", "--schedule", "0,1,1")
        report = json.loads("\n".join(out))
        assert report["results"]["spectrum"] == ["1", "2"]

    def test_xc_index_needs_generators(self, capsys):
        status, _, err = _run(capsys, "construct", "xc", "--club", "club(w,w^2)", "--index", "w*3")
        assert status == EXIT_PARSE_ERROR
        assert "--index and --schedule need --A" in err

    def test_xc_needs_a_club_source(self, capsys):
        assert _run(capsys, "construct", "xc")[0] == EXIT_PARSE_ERROR

    def test_classify_plank(self, capsys, sample):
        status, out, _ = _run(capsys, "classify", "run", "--region", sample("plank.region"))
        assert status == EXIT_OK
        assert out[0] == "label: Plank(w)"
        assert out[1] == "algebra: F(ω₁⊎ω)"
        assert out[-1] == "interpretation: uncountable := cofinal in Ω"

    def test_classify_rejects_cross(self, capsys, sample):
        status, _, err = _run(capsys, "classify", "run", "--region", sample("cross.region"))
        assert status == EXIT_SEMANTIC_ERROR
        assert "NOT_SUBLATTICE" in err

    def test_duality_roundtrip(self, capsys, sample):
        status, out, _ = _run(capsys, "dual", "roundtrip", "--poset", sample("diamond.poset"))
        assert status == EXIT_OK
        assert out[0] == "prime_filters(fs(P)) ≅ P"

    def test_suite_exit_status(self, capsys, monkeypatch):
        from app.models.schemas import CaseFailure, SuiteResult, SuiteSummary

        failing = SuiteSummary(results=[SuiteResult(name="ranks", cases=1, failures=[CaseFailure(case="x", reason="y")])])
        monkeypatch.setattr("app.commands.suites.run_suites", lambda names, runner: failing)
        status, out, _ = _run(capsys, "suite", "run", "ranks")
        assert status == EXIT_SUITE_FAILURE
        assert out[-1] == "FAIL: 1 cases"


class TestLogging:
    def test_registry_messages_follow_log_level(self, capsys, monkeypatch):
        monkeypatch.setattr("app.commands._loaded", {})
        status, _, err = _run(capsys, "ord", "eval", "w")
        assert status == EXIT_OK
        assert "loading command group" not in err

    def test_debug_level_shows_registry_messages(self, capsys, monkeypatch):
        monkeypatch.setattr("app.commands._loaded", {})
        monkeypatch.setenv("LOG_LEVEL", "DEBUG")
        _, _, err = _run(capsys, "ord", "eval", "w")
        assert "loading command group ord" in err
