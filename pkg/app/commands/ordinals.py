"""ord eval | ord cmp"""

from app.core.ordinal import compare, pretty, to_str
from app.models.schemas import SYMBOLIC, Report
from app.parsers.expressions import parse_ordinal

_VERDICT = {-1: "less", 0: "equal", 1: "greater"}


def register(subparsers):
    group = subparsers.add_parser("ord", help="ordinal arithmetic")
    commands = group.add_subparsers(dest="command", required=True)

    evaluate = commands.add_parser("eval", help="canonical form of an ordinal expression")
    evaluate.add_argument("expr")
    evaluate.set_defaults(handler=ord_eval)

    cmp = commands.add_parser("cmp", help="compare two ordinals")
    cmp.add_argument("left")
    cmp.add_argument("right")
    cmp.set_defaults(handler=ord_cmp)


def ord_eval(args) -> Report:
    value = parse_ordinal(args.expr, normalize=True)
    report = Report(command="ord eval", inputs={"expr": args.expr})
    report.lines.append(to_str(value))
    report.results = {"value": to_str(value), "unicode": pretty(value)}
    report.add_provenance("value", SYMBOLIC, "Cantor normal form")
    return report


def ord_cmp(args) -> Report:
    a = parse_ordinal(args.left, args.normalize)
    b = parse_ordinal(args.right, args.normalize)
    order = compare(a, b)
    verdict = _VERDICT[(order > 0) - (order < 0)]
    report = Report(command="ord cmp", inputs={"left": to_str(a), "right": to_str(b)})
    report.lines.append(verdict)
    report.results = {"verdict": verdict}
    report.add_provenance("verdict", SYMBOLIC, "term-wise comparison")
    return report
