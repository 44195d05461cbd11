"""Simulation command: Monte Carlo ML decoding against the union bound."""

import argparse
from typing import Any

from ..config.channel import SCALE_KINDS
from ..config.settings import simulation_config
from ..core.montecarlo import (
    SimConfig,
    energy_only_agreement,
    exponent_estimate,
    simulate_pe,
    verify_avg_bhatt,
)
from ..utils.error_handler import handle_command_errors
from ..utils.exceptions import VerificationFailedError
from ..utils.logging import get_logger
from ..utils.validators import parse_int_list, parse_matrix
from .base import add_codebook_arguments, add_spec_arguments, load_spec, resolve_codebook, write_result


logger = get_logger(__name__)

SIMULATE_DESCRIPTION = "Simulated ML error probability checked against K 2^(-n d_min)"

# |z| beyond this many standard errors fails the averaged-coefficient check
AVG_BHATT_Z_LIMIT = 3.0


def configure_simulate_parser(parser: argparse.ArgumentParser) -> None:
    add_spec_arguments(parser)
    add_codebook_arguments(parser)
    parser.add_argument("--n", dest="n", type=int, default=1, help="channel uses per codeword")
    parser.add_argument("--trials", type=int, default=100_000, help="Monte Carlo trials")
    parser.add_argument(
        "--confidence", type=float, help="standard errors allowed above the bound"
    )
    parser.add_argument(
        "--no-escalate",
        dest="auto_escalate",
        action="store_false",
        default=None,
        help="do not raise the trial count for tiny bounds",
    )
    parser.add_argument("--stream", type=int, default=0, help="substream index under --seed")
    parser.add_argument(
        "--exponent", action="store_true", help="fit the error exponent over --n-grid"
    )
    parser.add_argument(
        "--n-grid", dest="n_grid", default="1,2,3,4", help="block lengths for --exponent"
    )
    parser.add_argument(
        "--energy-only",
        dest="energy_only",
        action="store_true",
        help="also report agreement of ML with the energy detector (scale family)",
    )
    parser.add_argument(
        "--avg-bhatt",
        dest="avg_bhatt",
        help="difference matrix D: check the Rayleigh-averaged coefficient instead",
    )


@handle_command_errors("simulate", "simulate_pe")
def run_simulate(args: argparse.Namespace) -> int:
    """Run the requested simulation; exit 1 when the bound check fails."""
    if args.auto_escalate is None:
        args.auto_escalate = simulation_config.auto_escalate
    spec = load_spec(args)

    if args.avg_bhatt is not None:
        check = verify_avg_bhatt(
            parse_matrix(args.avg_bhatt, "avg_bhatt"),
            spec.N,
            spec.rho,
            args.trials,
            args.seed,
            args.threads,
        )
        write_result(args, "simulate", {"spec": spec, "avg_bhatt": check})
        if abs(check.z_score) > AVG_BHATT_Z_LIMIT:
            raise VerificationFailedError(
                f"averaged coefficient off by {check.z_score:.1f} standard errors",
                check.mc_estimate,
                check.closed_form,
            )
        return 0

    codebook = resolve_codebook(args, spec)
    if args.exponent:
        estimate = exponent_estimate(
            spec, codebook, parse_int_list(args.n_grid, "n_grid"), args.trials, args.seed, args.threads
        )
        if not estimate.above_floor:
            logger.warning(
                "Fitted exponent below the union-bound floor",
                extra_data={"slope": estimate.slope, "floor": estimate.floor},
            )
        write_result(args, "simulate", {"spec": spec, "exponent": estimate}, estimate.points)
        return 0

    result = simulate_pe(
        SimConfig(
            spec=spec,
            codebook=codebook,
            n=args.n,
            trials=args.trials,
            seed=args.seed,
            confidence=args.confidence,
            stream=args.stream,
            threads=args.threads,
            auto_escalate=args.auto_escalate,
        )
    )
    data: dict[str, Any] = {"spec": spec, "codebook": codebook.to_list(), "result": result}
    if args.energy_only and spec.kind in SCALE_KINDS:
        data["energy_only_agreement"] = energy_only_agreement(
            spec, codebook, args.n, min(args.trials, 100_000), args.seed
        )
    write_result(args, "simulate", data, [result.to_dict()])
    if not result.passed:
        raise VerificationFailedError(
            "simulated error rate exceeds the union bound",
            result.pe_hat,
            result.bound,
        )
    return 0
