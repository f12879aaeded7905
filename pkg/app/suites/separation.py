"""Rank spectra of X(C) over clubs generated by subsets of {w, w^2, w^3, w^4}."""

from itertools import combinations
from typing import Dict, List, Optional, Tuple

from app.core.construct import ClubSpec, SpectrumReport, spectrum_of
from app.core.ordinal import OMEGA, Ordinal, ln, omega_pow, to_str
from app.models.schemas import SuiteResult
from app.utils.batch_processor import SuiteRunner

Generators = Tuple[Ordinal, ...]


def generator_sets(max_exponent: int = 4) -> List[Generators]:
    base = [omega_pow(k) for k in range(1, max_exponent + 1)]
    return [tuple(c) for size in range(2, len(base) + 1) for c in combinations(base, size)]


def _text(a: Generators) -> str:
    return "{" + ",".join(to_str(g) for g in a) + "}"


def run(runner: SuiteRunner, max_exponent: int = 4, nu: Ordinal = OMEGA) -> SuiteResult:
    sets = generator_sets(max_exponent)
    spectra: Dict[Generators, SpectrumReport] = {}

    def check_spectrum(a: Generators) -> Optional[str]:
        report = spectrum_of(ClubSpec.with_index(a), nu)
        spectra[a] = report
        if not report.agreement:
            return "predicted and measured point ranks differ"
        expected = tuple(sorted((ln(g) for g in a), key=lambda e: e.to_int()))
        if report.spectrum != expected:
            return f"spectrum {report.text()}, expected {{{','.join(to_str(e) for e in expected)}}}"
        return None

    failures = runner.run("separation/spectra", sets, check_spectrum, describe=_text)

    def check_pair(pair: Tuple[Generators, Generators]) -> Optional[str]:
        a, b = pair
        if a not in spectra or b not in spectra:
            return "spectrum unavailable"
        if spectra[a].spectrum == spectra[b].spectrum:
            return f"both spectra equal {spectra[a].text()}"
        return None

    pairs = list(combinations(sets, 2))
    failures += runner.run("separation/pairs", pairs, check_pair, describe=lambda p: f"{_text(p[0])} vs {_text(p[1])}")
    return SuiteResult(
        name="separation",
        cases=len(pairs),
        failures=failures,
        checks={"spectra": len(sets), "pairs": len(pairs)},
    )
