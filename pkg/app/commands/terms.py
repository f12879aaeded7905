"""term rank | term invariants | term instantiate"""

from typing import Optional

from loguru import logger

from app.core.ordinal import Ordinal, to_str
from app.core.spaceterm import SpaceTerm, end_point, explain_rank, instantiate, invariant_vector, oracle_rank, rank
from app.models.schemas import CONSTRUCTION, ORACLE, SYMBOLIC, Report
from app.parsers.expressions import parse_term
from app.utils.error_handlers import UnsupportedTermError


def register(subparsers):
    group = subparsers.add_parser("term", help="spaces built from ordinal intervals")
    commands = group.add_subparsers(dest="command", required=True)
    for name, handler, text in (
        ("rank", term_rank, "symbolic rank checked against the region oracle"),
        ("invariants", term_invariants, "rank, unitarity, derived-set shape and summands"),
        ("instantiate", term_instantiate, "region realizing the term"),
    ):
        parser = commands.add_parser(name, help=text)
        parser.add_argument("term")
        parser.set_defaults(handler=handler)


def _oracle(term: SpaceTerm) -> Optional[Ordinal]:
    try:
        return oracle_rank(term)
    except UnsupportedTermError as e:
        logger.debug(f"no oracle for {term}: {e.message}")
        return None


def term_rank(args) -> Report:
    term = parse_term(args.term, args.normalize)
    value = rank(term)
    rule = explain_rank(term)
    measured = _oracle(term)
    report = Report(command="term rank", inputs={"term": str(term)})
    oracle = "n/a" if measured is None else to_str(measured)
    report.lines.append(f"{to_str(value)} ({rule}; oracle: {oracle})")
    report.results = {"rank": to_str(value), "rule": rule, "oracle": oracle}
    report.add_provenance("rank", SYMBOLIC, rule)
    if measured is not None:
        report.add_provenance("rank", ORACLE, "derivative iteration on the instantiated region")
        if measured != value:
            report.mismatch(f"symbolic rank {to_str(value)} vs oracle {to_str(measured)}")
    return report


def term_invariants(args) -> Report:
    term = parse_term(args.term, args.normalize)
    vector = invariant_vector(term)
    report = Report(command="term invariants", inputs={"term": str(term)})
    report.lines.append(str(vector))
    point = end_point(term)
    if point is not None:
        report.lines.append(f"end point: {point}")
    report.results = {
        "rank": None if vector.rank is None else to_str(vector.rank),
        "unitary": vector.unitary,
        "shape": None if vector.shape is None else str(vector.shape),
        "end_point": point,
    }
    report.add_provenance("invariants", SYMBOLIC, "rank calculus")
    return report


def term_instantiate(args) -> Report:
    term = parse_term(args.term, args.normalize)
    region = instantiate(term)
    report = Report(command="term instantiate", inputs={"term": str(term)})
    report.lines.extend(str(region).splitlines())
    report.results = {"region": str(region)}
    report.add_provenance("region", CONSTRUCTION, type(term).__name__)
    return report
