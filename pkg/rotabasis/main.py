"""
rotabasis command line.

    python -m rotabasis [--threads K] [--output PATH] [--verbose] <command> [flags]

Exit codes: 0 success or predicate true, 1 predicate false or nothing found,
2 usage error, 3 invalid input, 4 resource guard exceeded.
"""

import argparse
import sys
from pathlib import Path
from typing import Dict, List, Optional

from loguru import logger
from pydantic import ValidationError

from rotabasis import __version__, config
from rotabasis.api import invariants, rota, slicerank, tensors
from rotabasis.api.io import render
from rotabasis.exceptions import RotaBasisError, UsageError

ROUTERS = (tensors, slicerank, invariants, rota)


def _operations() -> Dict[str, str]:
    """operation name -> the subcommand that exposes it"""
    table: Dict[str, str] = {}
    for router in ROUTERS:
        for command, ops in router.COMMANDS.items():
            for op in (ops,) if isinstance(ops, str) else ops:
                table[op] = command
    return table


OPERATIONS = _operations()


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="rotabasis",
        description="Exact tensor algebra, SL-invariants and the asymptotic Rota basis solver",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, help="worker cap for parallel evaluation (default: machine parallelism)")
    parser.add_argument("--output", help="write the result to this file instead of stdout")
    parser.add_argument("--verbose", action="store_true", help="debug output on stderr")

    subparsers = parser.add_subparsers(dest="command", metavar="command", required=True)
    for router in ROUTERS:
        router.register(subparsers)
    return parser


LOG_FORMAT = "{level}: {message}"


def configure_logging(verbose: bool) -> None:
    level = "DEBUG" if verbose else config.LOG_LEVEL
    logger.remove()
    try:
        logger.add(sys.stderr, level=level, format=LOG_FORMAT)
    except ValueError:
        logger.add(sys.stderr, level="WARNING", format=LOG_FORMAT)
        raise UsageError(f"Unknown log level {level!r} (ROTABASIS_LOG_LEVEL)")


def write_output(path: str, text: str) -> None:
    try:
        Path(path).write_text(text, encoding="utf-8")
    except OSError as e:
        raise UsageError(f"Cannot write --output {path}: {e.strerror or e}")


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else 0

    try:
        configure_logging(args.verbose)
    except RotaBasisError as e:
        logger.error("{}", e.detail)
        return e.exit_code
    if args.threads is not None and args.threads < 1:
        logger.error("--threads must be at least 1")
        return 2

    try:
        outcome = args.handler(args)
    except ValidationError as e:
        logger.error("invalid input document: {}", e)
        return 3
    except RotaBasisError as e:
        logger.error("{}: {}", type(e).__name__, e.detail)
        return e.exit_code

    for line in outcome.diagnostics:
        logger.warning("{}", line)
    if outcome.payload is not None:
        text = render(outcome.payload) + "\n"
        if args.output:
            try:
                write_output(args.output, text)
            except RotaBasisError as e:
                logger.error("{}", e.detail)
                return e.exit_code
        else:
            sys.stdout.write(text)
    return 0 if outcome.ok else 1


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
