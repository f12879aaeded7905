"""
ordlab: exact ordinal arithmetic, Cantor-Bendixson ranks and the closed
sublattices of [0,Ω]², from the command line.

Every command group registers its subcommands before parsing. Logging is
configured first, so registry messages follow LOG_LEVEL as well.
"""

import argparse
import sys
import time
from typing import List, Optional

from loguru import logger

from app.commands import COMMAND_GROUPS, get_command_group
from app.config import config
from app.utils.error_handlers import EXIT_PARSE_ERROR, handle_command_errors, setup_logging, validate_environment


def build_parser(groups=COMMAND_GROUPS) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ordlab",
        description="Exact symbolic toolkit for ordinals, scattered spaces and their dual algebras.",
    )
    parser.add_argument("--format", choices=("text", "json"), help="output format (default OUTPUT_FORMAT)")
    parser.add_argument("--bound", type=int, help="derivative iteration bound (default DERIVATIVE_BOUND)")
    parser.add_argument("--eps", type=int, help="number of ε atoms accepted in input (default EPSILON_ATOMS)")
    parser.add_argument("--seed", type=int, help="random seed for generated suites (default RANDOM_SEED)")
    parser.add_argument("--normalize", action="store_true", help="accept non-canonical ordinal literals")
    parser.add_argument("--log-level", help="loguru level for stderr (default LOG_LEVEL)")

    subparsers = parser.add_subparsers(dest="group", required=True, metavar="GROUP")
    for name in groups:
        get_command_group(name).register(subparsers)
    return parser


def apply_overrides(args: argparse.Namespace):
    config.override("DERIVATIVE_BOUND", args.bound)
    config.override("EPSILON_ATOMS", args.eps)
    config.override("RANDOM_SEED", args.seed)
    config.override("OUTPUT_FORMAT", args.format)
    config.override("LOG_LEVEL", args.log_level)


@handle_command_errors
def run(args: argparse.Namespace) -> int:
    validate_environment()
    setup_logging()
    start_time = time.time()
    report = args.handler(args)
    logger.debug(f"{report.command} finished in {time.time() - start_time:.3f}s with status {report.exit_status}")
    print(report.render(config.output_format))
    return report.exit_status


def main(argv: Optional[List[str]] = None) -> int:
    config.reset_overrides()
    try:
        setup_logging()
    except ValueError:
        # a bad LOG_LEVEL is reported by validate_environment
        setup_logging("WARNING")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_PARSE_ERROR if e.code else 0
    apply_overrides(args)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())
