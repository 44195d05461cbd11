"""Command-line interface for gauge-frontier.

Every subcommand shares the global flags below. Results go to stdout or
``--out``; logs go to stderr. Exit codes: 0 success (including inconclusive
verdicts), 1 numerical or verification failure, 2 usage or validation error.
"""

import argparse
import json
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from . import __version__
from .commands.base import DEFAULT_RHO_GRID, EXCLUDED_CONFIG_KEYS
from .commands.register_commands import COMMAND_REGISTRY, log_registered_commands
from .config.settings import validate_environment
from .utils.error_handler import error_handler
from .utils.exceptions import ConfigurationError
from .utils.formatters import dump_json
from .utils.logging import get_logger, setup_enhanced_logging


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"{text!r} is not an integer") from e
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _common_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    group = common.add_argument_group("global options")
    group.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    group.add_argument("--out", help="write the result here instead of stdout")
    group.add_argument(
        "--format", choices=["json", "csv"], default="json", help="result format"
    )
    group.add_argument(
        "--rho-grid",
        dest="rho_grid",
        default=DEFAULT_RHO_GRID,
        help="SNR grid start:stop:points in decades (default %(default)s)",
    )
    verbosity = group.add_mutually_exclusive_group()
    verbosity.add_argument("--quiet", action="store_true", help="log errors only")
    verbosity.add_argument("--verbose", action="store_true", help="log debug records")
    group.add_argument(
        "--threads", type=_positive_int, help="worker threads (GAUGE_FRONTIER_THREADS)"
    )
    group.add_argument("--config", help="replay the config block of an earlier result")
    return common


def _build_parsers() -> tuple[argparse.ArgumentParser, dict[str, argparse.ArgumentParser]]:
    parser = argparse.ArgumentParser(
        prog="gauge-frontier",
        description="Bhattacharyya packing, diversity frontiers and SNR gauges for fading channels",
    )
    parser.add_argument("--version", action="version", version=f"gauge-frontier {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")
    common = _common_parser()

    commands: dict[str, argparse.ArgumentParser] = {}
    for name, info in COMMAND_REGISTRY.items():
        sub = subparsers.add_parser(
            name, parents=[common], help=info["description"], description=info["description"]
        )
        info["configure"](sub)
        sub.set_defaults(handler=info["function"])
        commands[name] = sub
    return parser, commands


def build_parser() -> argparse.ArgumentParser:
    """Parser with every registered subcommand."""
    return _build_parsers()[0]


def _read_config(path: str) -> dict[str, Any]:
    try:
        document = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigurationError(
            f"Cannot read config file: {e}", config_key="config", config_value=path
        ) from e
    if not isinstance(document, dict):
        raise ConfigurationError("config file must hold a JSON object", config_key="config")
    return document


def parse_args(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parse ``argv``; with ``--config`` the stored request fills in defaults.

    Flags given on the command line still win over the stored values.
    """
    parser, commands = _build_parsers()
    args = parser.parse_args(argv)
    if not args.config:
        return args

    document = _read_config(args.config)
    command = document.get("command", args.command)
    if command != args.command:
        raise ConfigurationError(
            f"config file was written by '{command}', not '{args.command}'",
            config_key="command",
            config_value=str(command),
        )
    stored = document.get("config", document)
    if not isinstance(stored, dict):
        raise ConfigurationError("config block must be a JSON object", config_key="config")
    commands[args.command].set_defaults(
        **{
            key: value
            for key, value in stored.items()
            if key not in EXCLUDED_CONFIG_KEYS and key != "command"
        }
    )
    return parser.parse_args(argv)


def _report(error: ConfigurationError, operation: str) -> int:
    response, exit_code = error_handler.handle_error(error, command="cli", operation=operation)
    sys.stderr.write(dump_json(response))
    return exit_code


def main(argv: Sequence[str] | None = None) -> int:
    """Run one subcommand and return its exit code."""
    try:
        args = parse_args(argv)
    except ConfigurationError as e:
        return _report(e, "parse_args")

    level = "ERROR" if args.quiet else "DEBUG" if args.verbose else None
    setup_enhanced_logging(level)
    logger = get_logger(__name__)

    try:
        validate_environment()
    except ConfigurationError as e:
        return _report(e, "validate_environment")

    log_registered_commands()
    logger.debug("Running command", extra_data={"command": args.command, "seed": args.seed})
    return int(args.handler(args))
