"""suite all | suite run NAME..."""

from app.models.schemas import Report
from app.suites import SUITE_NAMES, run_suites
from app.utils.batch_processor import SuiteRunner
from app.utils.error_handlers import EXIT_SUITE_FAILURE


def register(subparsers):
    group = subparsers.add_parser("suite", help="acceptance suites")
    commands = group.add_subparsers(dest="command", required=True)

    every = commands.add_parser("all", help="run every suite")
    every.add_argument("--workers", type=int, help="worker threads (default SUITE_WORKERS)")
    every.set_defaults(handler=suite_run, names=list(SUITE_NAMES))

    some = commands.add_parser("run", help="run the named suites")
    some.add_argument("names", nargs="+", choices=SUITE_NAMES)
    some.add_argument("--workers", type=int)
    some.set_defaults(handler=suite_run)


def suite_run(args) -> Report:
    summary = run_suites(args.names, SuiteRunner(workers=args.workers))
    report = Report(command="suite " + ("all" if list(args.names) == list(SUITE_NAMES) else "run"), inputs={"suites": " ".join(args.names)})
    for result in summary.results:
        report.lines.append(result.line())
        report.lines.extend(f"  {f.case}: {f.reason}" for f in result.failures[:10])
        report.notes.extend(f"{result.name}: {n}" for n in result.notes)
    report.lines.append(f"{'PASS' if summary.passed else 'FAIL'}: {summary.total_cases} cases")
    report.results = {"suites": [r.model_dump() for r in summary.results], "passed": summary.passed}
    if not summary.passed:
        report.exit_status = EXIT_SUITE_FAILURE
    return report
