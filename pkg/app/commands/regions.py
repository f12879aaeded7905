"""region derive | region rank | region pointrank"""

from app.commands import read_text
from app.core.region import Region
from app.models.schemas import ORACLE, Report
from app.parsers.documents import parse_region_file
from app.parsers.expressions import parse_ordinal_list
from app.utils.error_handlers import ParseError


def register(subparsers):
    group = subparsers.add_parser("region", help="regions inside a product of two intervals")
    commands = group.add_subparsers(dest="command", required=True)

    derive = commands.add_parser("derive", help="n-th derivative of a region")
    derive.add_argument("--region", required=True, help="region file")
    derive.add_argument("--times", type=int, default=1)
    derive.set_defaults(handler=region_derive)

    rank = commands.add_parser("rank", help="rank by derivative iteration")
    rank.add_argument("--region", required=True)
    rank.set_defaults(handler=region_rank)

    point = commands.add_parser("pointrank", help="rank of one point")
    point.add_argument("--region", required=True)
    point.add_argument("--point", required=True, help="'x,y'")
    point.set_defaults(handler=region_pointrank)


def load_region(args) -> Region:
    return parse_region_file(read_text(args.region), args.normalize)


def region_derive(args) -> Report:
    region = load_region(args)
    derived = region.derivative_n(args.times)
    report = Report(command="region derive", inputs={"region": args.region, "times": str(args.times)})
    report.lines.extend(str(derived).splitlines())
    report.results = {"region": str(derived), "empty": derived.is_empty}
    report.add_provenance("derivative", ORACLE, f"{args.times} acc steps over pieces")
    return report


def region_rank(args) -> Report:
    region = load_region(args)
    result = region.cb_rank_finite()
    report = Report(command="region rank", inputs={"region": args.region})
    report.lines.append(f"{result} (oracle: {result.path})")
    report.results = {"rank": str(result), "path": result.path}
    report.add_provenance("rank", ORACLE, result.path)
    if not result.known:
        report.notes.append(f"residue after the iteration bound:\n{result.residue}")
    return report


def region_pointrank(args) -> Report:
    region = load_region(args)
    coords = parse_ordinal_list(args.point, args.normalize)
    if len(coords) != 2:
        raise ParseError(f"a point has two coordinates, got {len(coords)}", args.point)
    point = (coords[0], coords[1])
    result = region.point_rank(point)
    report = Report(command="region pointrank", inputs={"region": args.region, "point": f"{point[0]},{point[1]}"})
    report.lines.append(f"{result} (oracle: {result.path})")
    report.results = {"point_rank": str(result), "path": result.path}
    report.add_provenance("point rank", ORACLE, result.path)
    return report
