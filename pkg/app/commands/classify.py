"""classify run | classify selftest | classify catalog"""

from app.commands import read_text
from app.config import config
from app.core.classify import UNKNOWN, classify, rectangle_selftest
from app.core.ordinal import to_str
from app.models.schemas import EXHAUSTIVE, ORACLE, SYMBOLIC, Report
from app.parsers.documents import parse_region_file
from app.parsers.expressions import parse_ordinal


def register(subparsers):
    group = subparsers.add_parser("classify", help="closed sublattices of [0,Ω]²")
    commands = group.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="label a region file")
    run.add_argument("--region", required=True, help="region file")
    run.add_argument("--top", help="Ω (default: the larger ambient side)")
    run.add_argument("--no-check", action="store_true", help="skip the closed and sublattice checks")
    run.set_defaults(handler=classify_run)

    selftest = commands.add_parser("selftest", help="rectangle identity against brute force")
    selftest.add_argument("--cases", type=int, default=1000)
    selftest.add_argument("--side", type=int, default=8)
    selftest.set_defaults(handler=classify_selftest)

    catalog = commands.add_parser("catalog", help="list the shipped catalog with fresh labels")
    catalog.add_argument("--path", help="catalog file (default CATALOG_PATH)")
    catalog.set_defaults(handler=classify_catalog)


def classify_run(args) -> Report:
    region = parse_region_file(read_text(args.region), args.normalize)
    omega = parse_ordinal(args.top, args.normalize) if args.top else None
    result = classify(region, omega, check=not args.no_check)

    report = Report(command="classify run", inputs={"region": args.region, "top": to_str(result.omega)})
    report.lines.append(f"label: {result.label}")
    report.lines.append(f"algebra: {result.algebra}")
    report.lines.append(f"case: {result.case}" + (" (transposed)" if result.transposed else ""))
    for name, label in result.parts.items():
        report.lines.append(f"part {name}: {label}")
    for key in sorted(set(result.predicted) | set(result.measured)):
        report.lines.append(f"{key}: predicted {result.predicted.get(key, 'n/a')}, measured {result.measured.get(key, 'n/a')}")
    report.lines.extend(f"  {note}" for note in result.notes)
    report.lines.append(f"interpretation: {result.interpretation}")

    report.results = {
        "label": str(result.label),
        "algebra": result.algebra,
        "case": result.case,
        "transposed": result.transposed,
        "parts": {k: str(v) for k, v in result.parts.items()},
        "predicted": result.predicted,
        "measured": result.measured,
        "interpretation": result.interpretation,
    }
    report.add_provenance("label", SYMBOLIC, f"case analysis on the top row and column, case {result.case}")
    report.add_provenance("measured", ORACLE, "derivative iteration on the region")
    if result.label.kind == UNKNOWN:
        report.mismatch("classifier could not label the region")
    elif not result.matches:
        report.mismatch("predicted and measured invariants differ")
    return report


def classify_selftest(args) -> Report:
    failures = rectangle_selftest(args.cases, side=args.side, seed=config.random_seed)
    report = Report(command="classify selftest", inputs={"cases": str(args.cases), "seed": str(config.random_seed)})
    status = "PASS" if not failures else "FAIL"
    report.lines.append(f"{status} rectangle: {args.cases} cases, {len(failures)} failures")
    report.lines.extend(failures[:20])
    report.results = {"cases": args.cases, "failures": failures}
    report.add_provenance("rectangle identity", EXHAUSTIVE, "lattice closures of random point sets")
    if failures:
        report.exit_status = 1
    return report


def classify_catalog(args) -> Report:
    from app.suites.catalog import check_entry, load_catalog

    catalog = load_catalog(args.path)
    report = Report(command="classify catalog", inputs={"path": args.path or config.catalog_path})
    for entry in catalog.entries:
        reason = check_entry(entry)
        status = "ok" if reason is None else f"FAIL ({reason})"
        report.lines.append(f"{entry.name}: {entry.expected} {status}")
        if reason is not None:
            report.mismatch(f"{entry.name}: {reason}")
    report.results = {"entries": len(catalog.entries), "failures": len(report.mismatches)}
    return report
