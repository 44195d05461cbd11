"""Divergence commands: closed-form Gaussian distances and their oracles."""

import argparse
from typing import Any

import numpy as np
from numpy.typing import NDArray

from ..core.divergence import (
    OutputLaw,
    ScalarGaussianDensity,
    avg_bhatt_rayleigh,
    bhatt_gaussian,
    bhatt_same_covariance,
    bhatt_same_mean,
    bhatt_scale,
    chernoff_information_scale,
    chernoff_scale,
    difference_eigenvalues,
    hellinger_from_bhatt,
    kl_scale,
    quadrature_bhatt_oracle,
    quadrature_kl_oracle,
)
from ..utils.error_handler import handle_command_errors
from ..utils.exceptions import ValidationError
from ..utils.logging import get_logger
from ..utils.validators import parse_matrix, parse_vector
from .base import write_result


logger = get_logger(__name__)

DIST_LAWS = (
    "same-cov",
    "same-mean",
    "gaussian",
    "scale",
    "kl",
    "hellinger",
    "chernoff",
    "chernoff-info",
    "avg-rayleigh",
)

DIST_DESCRIPTION = "Closed-form divergence between complex Gaussian laws (bits)"


def configure_dist_parser(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("law", choices=DIST_LAWS, help="divergence to evaluate")
    parser.add_argument("--mu1", help="first mean vector (JSON)")
    parser.add_argument("--mu2", help="second mean vector (JSON)")
    parser.add_argument("--cov", help="shared covariance (JSON or I<n>)")
    parser.add_argument("--cov1", help="first covariance (JSON or I<n>)")
    parser.add_argument("--cov2", help="second covariance (JSON or I<n>)")
    parser.add_argument("--v1", type=float, help="first variance of the scale family")
    parser.add_argument("--v2", type=float, help="second variance of the scale family")
    parser.add_argument("--s", type=float, default=0.5, help="Chernoff order in (0, 1)")
    parser.add_argument("--db", type=float, help="Bhattacharyya distance for the Hellinger map")
    parser.add_argument("--eigs", help="eigenvalues of D D^H (comma list)")
    parser.add_argument("--D", dest="D", help="codeword difference matrix (JSON)")
    parser.add_argument("--N", "--n", dest="N", type=int, default=1, help="receive antennas")
    parser.add_argument("--rho", type=float, help="SNR for the Rayleigh average")
    parser.add_argument(
        "--oracle", action="store_true", help="cross-check scalar laws by quadrature"
    )


def _require(args: argparse.Namespace, *names: str) -> None:
    for name in names:
        if getattr(args, name) is None:
            raise ValidationError(f"--{name} is required for the {args.law} law", name)


def _vector(text: str, name: str) -> NDArray[np.complex128]:
    return parse_matrix(text, name).ravel()


def evaluate_law(args: argparse.Namespace) -> dict[str, Any]:
    """Evaluate the requested law; values are in bits."""
    match args.law:
        case "same-cov":
            _require(args, "mu1", "mu2", "cov")
            value = bhatt_same_covariance(
                _vector(args.mu1, "mu1"), _vector(args.mu2, "mu2"), parse_matrix(args.cov, "cov")
            )
        case "same-mean":
            _require(args, "cov1", "cov2")
            value = bhatt_same_mean(parse_matrix(args.cov1, "cov1"), parse_matrix(args.cov2, "cov2"))
        case "gaussian":
            _require(args, "mu1", "mu2", "cov1", "cov2")
            value = bhatt_gaussian(
                OutputLaw(_vector(args.mu1, "mu1"), parse_matrix(args.cov1, "cov1")),
                OutputLaw(_vector(args.mu2, "mu2"), parse_matrix(args.cov2, "cov2")),
            )
        case "scale":
            _require(args, "v1", "v2")
            value = bhatt_scale(args.v1, args.v2)
        case "kl":
            _require(args, "v1", "v2")
            value = kl_scale(args.v1, args.v2)
        case "hellinger":
            if args.db is None:
                _require(args, "v1", "v2")
                value = hellinger_from_bhatt(bhatt_scale(args.v1, args.v2))
            else:
                value = hellinger_from_bhatt(args.db)
        case "chernoff":
            _require(args, "v1", "v2")
            value = chernoff_scale(args.v1, args.v2, args.s)
        case "chernoff-info":
            _require(args, "v1", "v2")
            information = chernoff_information_scale(args.v1, args.v2)
            return {"law": args.law, "value": information.value, "s": information.s}
        case "avg-rayleigh":
            _require(args, "rho")
            if args.eigs is not None:
                eigs = parse_vector(args.eigs, "eigs")
            elif args.D is not None:
                eigs = difference_eigenvalues(parse_matrix(args.D, "D"))
            else:
                raise ValidationError("--eigs or --D is required for avg-rayleigh", "eigs")
            averaged = avg_bhatt_rayleigh(eigs, args.N, args.rho)
            return {
                "law": args.law,
                "value": averaged.distance,
                "coefficient": averaged.coefficient,
                "eigs": eigs,
            }
        case _:
            raise ValidationError(f"unknown law {args.law}", "law", args.law)
    return {"law": args.law, "value": value}


def _scalar_pair(args: argparse.Namespace) -> tuple[ScalarGaussianDensity, ScalarGaussianDensity]:
    def scalar(text: str, name: str) -> complex:
        values = parse_matrix(text, name).ravel()
        if values.size != 1:
            raise ValidationError("--oracle supports scalar laws only", name, text, "1 x 1")
        return complex(values[0])

    match args.law:
        case "same-cov":
            var = scalar(args.cov, "cov").real
            return (
                ScalarGaussianDensity(scalar(args.mu1, "mu1"), var),
                ScalarGaussianDensity(scalar(args.mu2, "mu2"), var),
            )
        case "same-mean":
            return (
                ScalarGaussianDensity(0j, scalar(args.cov1, "cov1").real),
                ScalarGaussianDensity(0j, scalar(args.cov2, "cov2").real),
            )
        case "gaussian":
            return (
                ScalarGaussianDensity(scalar(args.mu1, "mu1"), scalar(args.cov1, "cov1").real),
                ScalarGaussianDensity(scalar(args.mu2, "mu2"), scalar(args.cov2, "cov2").real),
            )
        case "scale" | "kl" | "hellinger" if args.v1 is not None and args.v2 is not None:
            return ScalarGaussianDensity(0j, args.v1), ScalarGaussianDensity(0j, args.v2)
    raise ValidationError(
        f"no quadrature oracle for the {args.law} law", "oracle", args.law, "scalar law"
    )


def oracle_value(args: argparse.Namespace) -> float:
    """The same quantity by numerical integration of the densities."""
    first, second = _scalar_pair(args)
    if args.law == "kl":
        return quadrature_kl_oracle(first, second)
    distance = quadrature_bhatt_oracle(first, second)
    return hellinger_from_bhatt(distance) if args.law == "hellinger" else distance


@handle_command_errors("dist", "evaluate")
def run_dist(args: argparse.Namespace) -> int:
    """Evaluate one divergence and optionally its quadrature oracle."""
    logger.info("Evaluating divergence", extra_data={"law": args.law, "oracle": args.oracle})
    data = evaluate_law(args)
    if args.oracle:
        oracle = oracle_value(args)
        data["oracle"] = oracle
        data["oracle_abs_error"] = abs(oracle - data["value"])
    write_result(args, "dist", data)
    return 0
