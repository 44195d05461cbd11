"""Gauge commands: tradeoff classification, DMT tables and Szego sweeps."""

import argparse
from typing import Any

from ..config.settings import analysis_config
from ..core.channels import frac_log_pair_distance, szego_integral
from ..core.gauge import (
    LOG2_10,
    classify_tradeoff,
    default_candidates,
    dmt_compare,
    identify_gauge,
    read_sweep,
)
from ..core.streams import parallel_map
from ..utils.error_handler import handle_command_errors
from ..utils.exceptions import ValidationError
from ..utils.logging import get_logger
from ..utils.validators import parse_int_list
from .base import (
    add_gauge_arguments,
    add_spec_arguments,
    load_spec,
    rho_grid,
    write_result,
)


logger = get_logger(__name__)

CLASSIFY_DESCRIPTION = "Same-gauge / cross-gauge verdict from the Delta*(2)/capacity trace"
DMT_DESCRIPTION = "Union-Bhattacharyya diversity line against the optimal DMT curve"
SZEGO_DESCRIPTION = "Szego integral of the fractional-log channel over an SNR grid"


def configure_classify_parser(parser: argparse.ArgumentParser) -> None:
    add_spec_arguments(parser)
    add_gauge_arguments(parser, divergence_factor=True)
    parser.add_argument(
        "--sweep",
        help="identify the gauge of an offline CSV sweep (rho, log2_rho or log10_rho, value) instead",
    )


@handle_command_errors("classify", "classify_tradeoff")
def run_classify(args: argparse.Namespace) -> int:
    """Classify the tradeoff over ``--rho-grid``, or read the gauge of ``--sweep``."""
    if args.sweep is not None:
        reading = identify_gauge(read_sweep(args.sweep), drift_threshold=args.drift_threshold)
        rows = [
            {"log10_rho": x / LOG2_10, "ratio": q}
            for x, q in zip(reading.log2_rho, reading.ratios)
        ]
        write_result(args, "classify", {"sweep": args.sweep, "gauge": reading}, rows)
        return 0

    spec = load_spec(args)
    grid = rho_grid(args)
    report = classify_tradeoff(
        spec,
        grid,
        args.threads,
        divergence_factor=args.divergence_factor,
        drift_threshold=args.drift_threshold,
    )
    rows = [
        {"log10_rho": x / LOG2_10, "pair_frontier": d, "capacity": c, "ratio": q}
        for x, d, c, q in zip(
            report.log2_rho, report.pair_frontier, report.capacity, report.ratio_trace
        )
    ]
    write_result(args, "classify", report, rows)
    return 0


def configure_dmt_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--M", dest="M", type=int, help="transmit antennas")
    parser.add_argument("--N", dest="N", type=int, help="receive antennas")
    parser.add_argument(
        "--r-grid",
        dest="r_grid",
        default="0,0.5,1",
        help="multiplexing gains, comma separated (decimals or fractions like 2/3)",
    )


@handle_command_errors("dmt", "dmt_compare")
def run_dmt(args: argparse.Namespace) -> int:
    """Tabulate d_bh(r), d*(r) and their gap on exact rationals."""
    if args.M is None or args.N is None:
        raise ValidationError("--M and --N are required", "M")
    loads = [item.strip() for item in args.r_grid.split(",") if item.strip()]
    if not loads:
        raise ValidationError("--r-grid is empty", "r_grid", args.r_grid)
    try:
        points = [dmt_compare(args.M, args.N, load) for load in loads]
    except ZeroDivisionError as e:
        raise ValidationError("invalid fraction in --r-grid", "r_grid", args.r_grid) from e
    rows = [point.to_dict() for point in points]
    write_result(
        args,
        "dmt",
        {"M": args.M, "N": args.N, "points": points},
        rows,
        ["r", "d_bh", "d_star", "gap", "vacuous"],
    )
    return 0


def configure_szego_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--beta", type=float, help="PSD exponent in (0, 1)")
    parser.add_argument(
        "--c-beta", dest="c_beta", type=float, help="PSD constant (defaults to GAUGE_FRONTIER_C_BETA)"
    )
    parser.add_argument("--P", dest="P", type=float, default=1.0, help="input power")
    parser.add_argument("--N", dest="N", type=int, default=1, help="receive antennas")
    parser.add_argument(
        "--T-list",
        dest="t_list",
        help="block lengths for the pair-distance ratio at --rho (comma list)",
    )
    parser.add_argument("--rho", type=float, help="SNR for the block-length ratios")
    add_gauge_arguments(parser)


@handle_command_errors("szego", "szego_integral")
def run_szego(args: argparse.Namespace) -> int:
    """Sweep the Szego integral and read its gauge."""
    if args.beta is None:
        raise ValidationError("--beta is required", "beta")
    grid = rho_grid(args)
    c_beta = args.c_beta if args.c_beta is not None else analysis_config.c_beta
    log2_grid = grid.log2_values().tolist()
    values = parallel_map(
        lambda x: szego_integral(args.beta, c_beta, args.P, 2.0**x), log2_grid, args.threads
    )
    rows = [{"log10_rho": x / LOG2_10, "szego": v} for x, v in zip(log2_grid, values)]
    data: dict[str, Any] = {"beta": args.beta, "c_beta": c_beta, "rows": rows}

    samples = [(x, v) for x, v in zip(log2_grid, values) if v > 0]
    if len(samples) >= analysis_config.min_grid_points:
        data["gauge"] = identify_gauge(
            samples, default_candidates((args.beta,)), drift_threshold=args.drift_threshold
        )

    if args.t_list is not None:
        if args.rho is None:
            raise ValidationError("--rho is required with --T-list", "rho")
        reference = args.N * szego_integral(args.beta, c_beta, args.P, args.rho) / 2.0
        ratios = []
        for T in parse_int_list(args.t_list, "T_list"):
            distance = frac_log_pair_distance(args.P, args.beta, c_beta, args.rho, args.N, T)
            ratios.append({"T": T, "pair_distance": distance, "ratio": distance / reference})
        data["block_ratios"] = ratios
        logger.info("Block-length ratios computed", extra_data={"ratios": ratios})

    write_result(args, "szego", data, rows)
    return 0
