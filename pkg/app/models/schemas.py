"""
Pydantic models for command reports, suite results and the classifier catalog.
Every report renders as plain text (default) or as a JSON document with the
same fields.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, Field

# Code paths a number can come from
SYMBOLIC = "symbolic"
ORACLE = "oracle"
EXHAUSTIVE = "exhaustive"
CONSTRUCTION = "construction"


class Provenance(BaseModel):
    """Which code path produced a reported quantity."""

    quantity: str = Field(..., description="Name of the reported quantity")
    path: str = Field(..., description="symbolic, oracle, exhaustive or construction")
    detail: str = Field(default="", description="Rule or iteration that produced it")


class Report(BaseModel):
    """Result of one CLI command."""

    command: str = Field(..., description="Command echo, e.g. 'term rank'")
    inputs: Dict[str, str] = Field(default_factory=dict, description="Normalized inputs")
    lines: List[str] = Field(default_factory=list, description="Human-readable result lines")
    results: Dict[str, Any] = Field(default_factory=dict, description="Machine-readable results")
    provenance: List[Provenance] = Field(default_factory=list)
    mismatches: List[str] = Field(default_factory=list, description="Disagreements between code paths")
    notes: List[str] = Field(default_factory=list)
    exit_status: int = Field(default=0)

    def add_provenance(self, quantity: str, path: str, detail: str = ""):
        self.provenance.append(Provenance(quantity=quantity, path=path, detail=detail))

    def mismatch(self, message: str, status: int = 1):
        self.mismatches.append(message)
        self.exit_status = max(self.exit_status, status)

    def to_text(self) -> str:
        out = list(self.lines)
        out.extend(f"MISMATCH: {m}" for m in self.mismatches)
        out.extend(f"note: {n}" for n in self.notes)
        return "\n".join(out)

    def to_json(self) -> str:
        return self.model_dump_json(indent=2)

    def render(self, output_format: str = "text") -> str:
        return self.to_json() if output_format == "json" else self.to_text()


class CaseFailure(BaseModel):
    case: str
    reason: str


class SuiteResult(BaseModel):
    """Outcome of one acceptance suite."""

    name: str
    cases: int = Field(default=0, description="Number of cases checked")
    failures: List[CaseFailure] = Field(default_factory=list)
    checks: Dict[str, int] = Field(default_factory=dict, description="Per-property case counts")
    notes: List[str] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures and self.cases > 0

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status} {self.name}: {self.cases} cases, {len(self.failures)} failures"


class SuiteSummary(BaseModel):
    results: List[SuiteResult] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def total_cases(self) -> int:
        return sum(r.cases for r in self.results)


class CatalogEntry(BaseModel):
    """A shipped region together with the label the classifier should produce."""

    name: str
    description: str = ""
    top: str = Field(..., description="Designated top Ω as an ordinal literal")
    region: List[str] = Field(..., description="Region file lines")
    expected: str = Field(..., description="Expected label, e.g. 'Plank(w)'")
    expected_algebra: Optional[str] = None

    @property
    def region_text(self) -> str:
        return "\n".join(self.region)


class Catalog(BaseModel):
    entries: List[CatalogEntry] = Field(default_factory=list)
