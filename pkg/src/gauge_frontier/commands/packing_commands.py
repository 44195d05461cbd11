"""Packing commands: packing numbers, frontier sweeps and the cutoff rate."""

import argparse
import math
from typing import Any

from ..config.channel import SCALE_KINDS
from ..config.settings import analysis_config
from ..core.channels import effective_scale_spec
from ..core.gauge import (
    EXACT_SIZE_LIMIT,
    LOG2_10,
    b_diversity,
    gauge_dof,
    load_log2_size,
)
from ..core.packing import (
    Divergence,
    PackingResult,
    cutoff_rate,
    frontier_bounds,
    hellinger_covering_converse,
    kl_converse_bound,
    pack_count,
)
from ..core.streams import parallel_map
from ..utils.error_handler import handle_command_errors
from ..utils.exceptions import UnsupportedSpecError, ValidationError
from ..utils.logging import get_logger
from ..utils.validators import parse_vector
from .base import (
    add_codebook_arguments,
    add_gauge_arguments,
    add_spec_arguments,
    load_spec,
    resolve_codebook,
    rho_grid,
    write_result,
)


logger = get_logger(__name__)

PACK_DESCRIPTION = "Packing number N_pack(delta) and packing complexity at one SNR"
FRONTIER_DESCRIPTION = "Diversity frontier sandwich swept over an SNR grid"
CUTOFF_DESCRIPTION = "Cutoff rate of a codebook under the channel's distance"

FRONTIER_COLUMNS = (
    "rho",
    "K",
    "delta_star_lower",
    "delta_star_upper",
    "method_lower",
    "method_upper",
    "log10_rho",
    "log2_k",
)

# Largest base-2 exponent a double holds
MAX_LOG2_FLOAT = 1023.0


def _linear(log2_value: float) -> float:
    return 2.0**log2_value if log2_value <= MAX_LOG2_FLOAT else math.inf


# ---------------------------------------------------------------------------
# pack
# ---------------------------------------------------------------------------


def configure_pack_parser(parser: argparse.ArgumentParser) -> None:
    add_spec_arguments(parser)
    parser.add_argument("--delta", type=float, help="distance threshold (bits)")
    parser.add_argument(
        "--divergence",
        choices=[d.value for d in Divergence],
        default=Divergence.BHATTACHARYYA.value,
        help="divergence the threshold refers to (scale family only)",
    )
    parser.add_argument(
        "--budget", type=int, default=2**16, help="pair evaluations for expurgated packings"
    )
    parser.add_argument(
        "--gauge-dof",
        dest="gauge_dof",
        action="store_true",
        help="also read K_pack over --rho-grid on its gauge",
    )
    parser.add_argument(
        "--converse",
        action="store_true",
        help="report the Hellinger-covering and KL converses (scale family)",
    )
    parser.add_argument(
        "--eta", type=float, default=0.1, help="error level of the KL converse in (0, 1/2)"
    )
    add_gauge_arguments(parser)


def _packing_row(result: PackingResult) -> dict[str, Any]:
    return {
        "rho": result.rho,
        "delta": result.delta,
        "value_lower": result.value_lower,
        "value_upper": result.value_upper,
        "k_pack_lower": result.k_pack_lower,
        "k_pack_upper": result.k_pack_upper,
        "method_lower": result.method_lower,
        "method_upper": result.method_upper,
    }


@handle_command_errors("pack", "pack_count")
def run_pack(args: argparse.Namespace) -> int:
    """Packing sandwich at ``--delta``, with optional gauge-DOF and converses."""
    if args.delta is None:
        raise ValidationError("--delta is required", "delta")
    spec = load_spec(args)
    logger.info(
        "Computing packing number",
        extra_data={"kind": spec.kind.value, "delta": args.delta, "divergence": args.divergence},
    )
    result = pack_count(spec, args.delta, args.divergence, args.budget, args.seed)
    data: dict[str, Any] = {"spec": spec, "packing": result}

    if args.converse:
        if spec.kind not in SCALE_KINDS:
            raise UnsupportedSpecError(
                "covering converses are only available for the scale family",
                spec.kind.value,
                "pack",
            )
        scale = effective_scale_spec(spec)
        covering = hellinger_covering_converse(args.delta, scale.rho, scale.N)
        data["covering_converse"] = covering
        data["kl_converse_log2_k"] = kl_converse_bound(covering.n_cover, args.delta, args.eta)

    rows = [_packing_row(result)]
    if args.gauge_dof:
        reading = gauge_dof(
            spec,
            args.delta,
            rho_grid(args),
            args.budget,
            args.seed,
            args.threads,
            drift_threshold=args.drift_threshold,
        )
        data["gauge_dof"] = reading
        rows = [
            {"log10_rho": log2_rho / LOG2_10, "k_pack": value}
            for log2_rho, value in zip(
                rho_grid(args).log2_values(), reading.diagnostics.get("values", [])
            )
        ]
    write_result(args, "pack", data, rows)
    return 0


# ---------------------------------------------------------------------------
# frontier
# ---------------------------------------------------------------------------


def configure_frontier_parser(parser: argparse.ArgumentParser) -> None:
    add_spec_arguments(parser)
    size = parser.add_mutually_exclusive_group()
    size.add_argument("--K", dest="K", type=int, help="number of codewords")
    size.add_argument("--log2-k", dest="log2_k", type=float, help="log2 of the codebook size")
    size.add_argument(
        "--load", type=float, help="load r; the size follows the channel's normalization"
    )
    parser.add_argument(
        "--search-trials",
        dest="search_trials",
        type=int,
        default=16,
        help="random restarts per SNR point",
    )
    add_gauge_arguments(parser)


def _frontier_point(args: argparse.Namespace, spec: Any, log2_rho: float) -> dict[str, Any]:
    rated = spec.with_rho(2.0**log2_rho)
    K, log2_k = args.K, args.log2_k
    if args.load is not None:
        size = load_log2_size(spec, args.load, log2_rho)
        if size <= EXACT_SIZE_LIMIT:
            K, log2_k = max(2, math.ceil(2.0**size)), None
        else:
            K, log2_k = None, size
    result = frontier_bounds(
        rated, K=K, log2_k=log2_k, trials=args.search_trials, seed=args.seed, threads=1
    )
    size_log2 = math.log2(K) if K is not None else log2_k
    row: dict[str, Any] = {
        "rho": _linear(log2_rho),
        "K": K if K is not None else _linear(size_log2),
        "delta_star_lower": result.value_lower,
        "delta_star_upper": result.value_upper,
        "method_lower": result.method_lower,
        "method_upper": result.method_upper,
        "log10_rho": log2_rho / LOG2_10,
        "log2_k": size_log2,
    }
    if spec.kind in SCALE_KINDS and args.load is not None:
        scale = effective_scale_spec(rated)
        gauge = (scale.N / 2.0) * math.log2(scale.rho) ** (1.0 - args.load)
        row["ratio"] = result.value_lower / gauge
    return row


@handle_command_errors("frontier", "frontier_bounds")
def run_frontier(args: argparse.Namespace) -> int:
    """Sweep the frontier sandwich over ``--rho-grid``."""
    if sum(value is not None for value in (args.K, args.log2_k, args.load)) != 1:
        raise ValidationError("exactly one of --K, --log2-k or --load is required", "K")
    spec = load_spec(args)
    grid = rho_grid(args)
    logger.info(
        "Sweeping diversity frontier",
        extra_data={"kind": spec.kind.value, "grid": str(grid), "K": args.K, "load": args.load},
    )
    rows = parallel_map(
        lambda log2_rho: _frontier_point(args, spec, log2_rho),
        grid.log2_values().tolist(),
        args.threads,
    )
    data: dict[str, Any] = {"spec": spec, "rows": rows}
    if args.load is not None and grid.points >= analysis_config.min_grid_points:
        data["b_diversity"] = b_diversity(
            spec,
            args.load,
            grid,
            args.search_trials,
            args.seed,
            args.threads,
            drift_threshold=args.drift_threshold,
        )

    columns = list(FRONTIER_COLUMNS)
    if rows and "ratio" in rows[0]:
        columns.append("ratio")
    write_result(args, "frontier", data, rows, columns)
    return 0


# ---------------------------------------------------------------------------
# cutoff
# ---------------------------------------------------------------------------


def configure_cutoff_parser(parser: argparse.ArgumentParser) -> None:
    add_spec_arguments(parser)
    add_codebook_arguments(parser)
    parser.add_argument("--weights", help="input distribution over the codebook (comma list)")


@handle_command_errors("cutoff", "cutoff_rate")
def run_cutoff(args: argparse.Namespace) -> int:
    """Cutoff rate ``R0`` of a codebook in bits per channel use."""
    spec = load_spec(args)
    codebook = resolve_codebook(args, spec)
    weights = None if args.weights is None else parse_vector(args.weights, "weights")
    if weights is not None and weights.size != len(codebook):
        raise ValidationError(
            "one weight per codeword is required", "weights", weights.size, f"{len(codebook)}"
        )
    value = cutoff_rate(codebook, weights)
    data = {
        "spec": spec,
        "K": len(codebook),
        "cutoff_rate": value,
        "log2_k": math.log2(len(codebook)),
        "min_distance": codebook.min_distance(),
    }
    write_result(args, "cutoff", data)
    return 0
