"""set eval | set derive | set rank | set ot"""

from typing import Optional

from app.core.ordinal import Ordinal, to_str
from app.core.strata import StrataSet
from app.models.schemas import ORACLE, SYMBOLIC, Report
from app.parsers.expressions import parse_ordinal, parse_set


def register(subparsers):
    group = subparsers.add_parser("set", help="subsets of an ordinal interval")
    commands = group.add_subparsers(dest="command", required=True)

    for name, handler, text in (
        ("eval", set_eval, "normal form of a set expression"),
        ("derive", set_derive, "Cantor-Bendixson derivative"),
        ("rank", set_rank, "rank of the set or of one point"),
        ("ot", set_ot, "order type"),
    ):
        parser = commands.add_parser(name, help=text)
        parser.add_argument("expr")
        parser.add_argument("--top", help="ambient top (default: largest bound mentioned)")
        parser.set_defaults(handler=handler)
        if name == "derive":
            parser.add_argument("--alpha", default="1", help="order of the derivative")
        if name == "rank":
            parser.add_argument("--point", help="rank of this point instead of the set")


def _load(args) -> StrataSet:
    top = parse_ordinal(args.top, args.normalize) if args.top else None
    return parse_set(args.expr, top, args.normalize)


def _iterated(s: StrataSet, bound: int):
    """Chain of derivatives when it reaches the empty set within the bound."""
    chain = s.derivative_chain(bound)
    return chain if chain[-1].is_empty else None


def set_eval(args) -> Report:
    s = _load(args)
    report = Report(command="set eval", inputs={"expr": args.expr, "top": to_str(s.top)})
    report.lines.append(str(s))
    report.results = {"set": str(s), "top": to_str(s.top), "closed": s.is_closed()}
    return report


def set_derive(args) -> Report:
    from app.config import config

    s = _load(args)
    alpha = parse_ordinal(args.alpha, args.normalize)
    derived = s.derivative_alpha(alpha)
    report = Report(command="set derive", inputs={"expr": str(s), "alpha": to_str(alpha)})
    report.lines.append(str(derived))
    report.results = {"derivative": str(derived)}
    report.add_provenance("derivative", SYMBOLIC if s.is_pure else ORACLE, "closed form" if s.is_pure else "iteration")
    if s.is_pure and alpha.is_finite and alpha.to_int() <= config.derivative_bound:
        iterated = s.derivative_chain(alpha.to_int())
        by_iteration = iterated[alpha.to_int()] if alpha.to_int() < len(iterated) else iterated[-1]
        report.add_provenance("derivative", ORACLE, f"{alpha.to_int()} acc steps")
        if not by_iteration.same_as(derived):
            report.mismatch(f"closed form {derived} vs iteration {by_iteration}")
    return report


def set_rank(args) -> Report:
    from app.config import config

    s = _load(args)
    point: Optional[Ordinal] = parse_ordinal(args.point, args.normalize) if args.point else None
    report = Report(command="set rank", inputs={"expr": str(s)})
    chain = _iterated(s, config.derivative_bound)
    if point is None:
        value, attained = s.rank_info()
        measured = Ordinal.of(len(chain) - 2) if chain is not None else None
        quantity = "rank"
        report.results = {"rank": to_str(value), "attained": attained}
    else:
        report.inputs["point"] = to_str(point)
        value = s.point_rank(point)
        measured = None
        if chain is not None:
            measured = Ordinal.of(next(n for n in range(len(chain)) if not chain[n + 1].contains(point)))
        quantity = "point rank"
        report.results = {"point_rank": to_str(value)}

    oracle = "not reached" if measured is None else to_str(measured)
    report.lines.append(f"{to_str(value)} (closed form; oracle: {oracle})")
    report.add_provenance(quantity, SYMBOLIC, "level-set order types")
    if measured is not None:
        report.add_provenance(quantity, ORACLE, f"{len(chain) - 1} derivatives to empty")
        report.results["oracle"] = to_str(measured)
        if measured != value:
            report.mismatch(f"{quantity}: closed form {value} vs oracle {measured}")
    return report


def set_ot(args) -> Report:
    s = _load(args)
    ot = s.order_type()
    report = Report(command="set ot", inputs={"expr": str(s)})
    report.lines.append(to_str(ot))
    report.results = {"order_type": to_str(ot)}
    report.add_provenance("order type", SYMBOLIC, "atom-wise sum")
    return report
