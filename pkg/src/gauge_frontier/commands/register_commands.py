"""Command registration system for the gauge-frontier CLI.

This module provides the central registry for all subcommands: the handler,
the function that configures its argument parser, a description, and the
command module it lives in.
"""

from typing import Any

from ..utils.logging import get_logger
from .dist_commands import DIST_DESCRIPTION, configure_dist_parser, run_dist
from .gauge_commands import (
    CLASSIFY_DESCRIPTION,
    DMT_DESCRIPTION,
    SZEGO_DESCRIPTION,
    configure_classify_parser,
    configure_dmt_parser,
    configure_szego_parser,
    run_classify,
    run_dmt,
    run_szego,
)
from .packing_commands import (
    CUTOFF_DESCRIPTION,
    FRONTIER_DESCRIPTION,
    PACK_DESCRIPTION,
    configure_cutoff_parser,
    configure_frontier_parser,
    configure_pack_parser,
    run_cutoff,
    run_frontier,
    run_pack,
)
from .simulation_commands import (
    SIMULATE_DESCRIPTION,
    configure_simulate_parser,
    run_simulate,
)


logger = get_logger(__name__)


# Command registry mapping subcommand names to handlers and parser setup
COMMAND_REGISTRY: dict[str, dict[str, Any]] = {
    # Divergence commands
    "dist": {
        "function": run_dist,
        "configure": configure_dist_parser,
        "description": DIST_DESCRIPTION,
        "module": "dist_commands",
    },
    # Packing commands
    "pack": {
        "function": run_pack,
        "configure": configure_pack_parser,
        "description": PACK_DESCRIPTION,
        "module": "packing_commands",
    },
    "frontier": {
        "function": run_frontier,
        "configure": configure_frontier_parser,
        "description": FRONTIER_DESCRIPTION,
        "module": "packing_commands",
    },
    "cutoff": {
        "function": run_cutoff,
        "configure": configure_cutoff_parser,
        "description": CUTOFF_DESCRIPTION,
        "module": "packing_commands",
    },
    # Gauge commands
    "classify": {
        "function": run_classify,
        "configure": configure_classify_parser,
        "description": CLASSIFY_DESCRIPTION,
        "module": "gauge_commands",
    },
    "dmt": {
        "function": run_dmt,
        "configure": configure_dmt_parser,
        "description": DMT_DESCRIPTION,
        "module": "gauge_commands",
    },
    "szego": {
        "function": run_szego,
        "configure": configure_szego_parser,
        "description": SZEGO_DESCRIPTION,
        "module": "gauge_commands",
    },
    # Simulation commands
    "simulate": {
        "function": run_simulate,
        "configure": configure_simulate_parser,
        "description": SIMULATE_DESCRIPTION,
        "module": "simulation_commands",
    },
}


def get_all_commands() -> list[str]:
    """Get list of all registered command names."""
    return list(COMMAND_REGISTRY.keys())


def get_command_by_name(name: str) -> dict[str, Any] | None:
    """Get command information by name.

    Args:
        name: Name of the command to retrieve

    Returns:
        Command information dictionary or None if not found
    """
    return COMMAND_REGISTRY.get(name)


def get_commands_by_module(module_name: str) -> list[str]:
    """Get all command names from a specific module."""
    return [
        name for name, info in COMMAND_REGISTRY.items() if info["module"] == module_name
    ]


def log_registered_commands() -> None:
    """Log the registered commands grouped by module (debug level)."""
    module_counts: dict[str, int] = {}
    for info in COMMAND_REGISTRY.values():
        module = info["module"]
        module_counts[module] = module_counts.get(module, 0) + 1
    logger.debug(
        "Commands registered",
        extra_data={"total_commands": len(COMMAND_REGISTRY), "by_module": module_counts},
    )


__all__ = [
    "COMMAND_REGISTRY",
    "get_all_commands",
    "get_command_by_name",
    "get_commands_by_module",
    "log_registered_commands",
]
