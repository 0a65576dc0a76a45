"""
Command line entry point.
Builds the parser, registers the subcommand groups and maps errors to exit codes.
"""

import argparse
import logging
import sys
from pathlib import Path
from typing import List, Optional

from pydantic import ValidationError

from . import __version__
from .commands import chain, scattering
from .errors import ComputeError, ConfigurationError, FitError, ParameterError
from .utils.export import render

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_COMPUTE_ERROR = 1
EXIT_USAGE_ERROR = 2


def build_parser() -> argparse.ArgumentParser:
    """Parser with every subcommand attached."""
    parser = argparse.ArgumentParser(
        prog="harmonic_chain",
        description="Quantum and thermal fluctuation observables of the pinned harmonic chain",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="subcommand", required=True, metavar="subcommand")

    # Register subcommand groups
    chain.register(subparsers)
    scattering.register(subparsers)
    return parser


def configure_logging(verbose: bool) -> None:
    """Diagnostics go to stderr; stdout carries data only."""
    logging.basicConfig(
        level=logging.DEBUG if verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
        force=True,
    )


def _one_line(error: Exception) -> str:
    if isinstance(error, ValidationError):
        first = error.errors()[0]
        location = ".".join(str(part) for part in first.get("loc", ()))
        return f"{location}: {first.get('msg')}" if location else str(first.get("msg"))
    return " ".join(str(error).split())


def run(argv: Optional[List[str]] = None) -> int:
    """
    Run one subcommand.

    Returns:
        int: 0 on success, 2 on usage errors, 1 on compute errors
    """
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse already printed its usage message
        return int(e.code) if isinstance(e.code, int) else EXIT_USAGE_ERROR

    configure_logging(args.verbose)

    try:
        table = args.handler(args)
        document = render(table, args.format)
    except (ParameterError, ValidationError, ConfigurationError) as e:
        print(f"{parser.prog} {args.subcommand}: error: {_one_line(e)}", file=sys.stderr)
        return EXIT_USAGE_ERROR
    except (ComputeError, FitError) as e:
        print(f"{parser.prog} {args.subcommand}: compute error: {_one_line(e)}", file=sys.stderr)
        return EXIT_COMPUTE_ERROR
    except MemoryError as e:
        print(f"{parser.prog} {args.subcommand}: compute error: out of memory: {_one_line(e)}", file=sys.stderr)
        return EXIT_COMPUTE_ERROR

    if args.output:
        Path(args.output).write_text(document, encoding="utf-8")
        logger.debug("Wrote %d rows to %s", table.n_rows, args.output)
    else:
        sys.stdout.write(document)
    return EXIT_OK


def main() -> int:
    return run(sys.argv[1:])


if __name__ == "__main__":
    sys.exit(main())
