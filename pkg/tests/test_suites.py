import pytest

from app.core.spaceterm import KSpace, OrdSpace
from app.core.ordinal import OMEGA
from app.suites import SUITE_NAMES, arithmetic, catalog, duality, epsilon, ranks, rectangle, run_suites, separation, vecsum
from app.utils.error_handlers import SemanticError


class TestRunner:
    def test_failures_keep_input_order(self, threaded_runner):
        failures = threaded_runner.run("odd", list(range(20)), lambda n: "odd" if n % 2 else None)
        assert [f.case for f in failures] == [str(n) for n in range(1, 20, 2)]

    def test_errors_become_failures(self, runner):
        def check(n):
            if n == 1:
                raise SemanticError("bad case", error_code="BAD")
            if n == 2:
                raise ValueError("boom")
            return None

        failures = runner.run("errors", [0, 1, 2], check)
        assert [f.reason for f in failures] == ["BAD: bad case", "internal error: boom"]


class TestSuites:
    def test_arithmetic(self, runner):
        result = arithmetic.run(runner, cases=200, seed=7)
        assert result.passed, result.failures[:3]
        assert result.cases == 200

    def test_random_triples_are_reproducible(self):
        assert arithmetic.random_triples(5, seed=1) == arithmetic.random_triples(5, seed=1)

    def test_rank_terms(self):
        terms = ranks.rank_terms()
        assert len(terms) == 248
        for term in (OrdSpace(OMEGA), KSpace(OMEGA)):
            assert ranks.check_term(term) is None

    def test_interval_ranks(self, runner):
        tops = ranks.interval_tops(count=30, seed=5)
        assert len(tops) == 44
        failures = runner.run("intervals", tops, ranks.check_interval)
        assert not failures, failures[:3]

    def test_vecsum(self, runner):
        result = vecsum.run(runner, limit=2)
        assert result.passed, result.failures[:3]

    def test_epsilon(self, runner):
        result = epsilon.run(runner, max_index=2, max_exponent=2)
        assert result.passed, result.failures[:3]
        assert result.checks == {"epsilon": 3, "union": 2, "profile": 2}

    def test_duality(self, threaded_runner):
        result = duality.run(threaded_runner, max_size=3, sum_total=4)
        assert result.passed, result.failures[:3]
        assert result.checks["roundtrip"] == 1 + 1 + 3 + 19

    def test_separation(self, runner):
        result = separation.run(runner, max_exponent=3)
        assert result.passed, result.failures[:3]
        assert result.cases == 6

    def test_rectangle(self, threaded_runner):
        result = rectangle.run(threaded_runner, cases=100, seed=11)
        assert result.passed, result.failures[:3]

    def test_catalog(self, runner):
        result = catalog.run(runner)
        assert result.passed, result.failures[:3]
        assert result.cases >= 20

    def test_catalog_missing_file(self, runner, tmp_path):
        with pytest.raises(SemanticError) as exc_info:
            catalog.load_catalog(str(tmp_path / "missing.json"))
        assert exc_info.value.error_code == "FILE_NOT_FOUND"


def test_registry_covers_every_suite(monkeypatch, runner):
    from app.models.schemas import SuiteResult

    seen = []

    def fake(name):
        def run(_runner):
            seen.append(name)
            return SuiteResult(name=name, cases=1)

        return run

    monkeypatch.setattr("app.suites._registry", lambda: {name: fake(name) for name in SUITE_NAMES})
    summary = run_suites(runner=runner)
    assert seen == list(SUITE_NAMES)
    assert summary.passed
    assert summary.total_cases == len(SUITE_NAMES)
