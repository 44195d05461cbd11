"""Shared plumbing for command handlers: channel arguments, grids and output."""

import argparse
import json
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from ..config.channel import ChannelSpec, load_channel_spec
from ..config.settings import analysis_config
from ..core.codebook import Codebook, codebook_for, parse_points
from ..core.gauge import RhoGrid
from ..core.packing import default_codebook
from ..utils.exceptions import ConfigurationError, ValidationError
from ..utils.formatters import dump_json, emit, format_csv, format_document
from ..utils.validators import parse_matrix, parse_vector


# Flags that only steer where and how a run happens; they never change results.
EXCLUDED_CONFIG_KEYS = frozenset(
    {"func", "out", "config", "quiet", "verbose", "threads", "handler"}
)

DEFAULT_RHO_GRID = "3:300:12"


def resolved_config(args: argparse.Namespace) -> dict[str, Any]:
    """The request as parsed, minus presentation-only flags."""
    return {
        key: value for key, value in vars(args).items() if key not in EXCLUDED_CONFIG_KEYS
    }


def add_spec_arguments(parser: argparse.ArgumentParser) -> None:
    """Channel flags shared by every command that takes a channel."""
    group = parser.add_argument_group("channel")
    group.add_argument("--spec", help="channel spec JSON document")
    group.add_argument(
        "--kind",
        help="FixedH, CoherentMIMO, BlockFading, FastFading, Multipath or FracLog",
    )
    group.add_argument("--M", dest="M", type=int, help="transmit antennas")
    group.add_argument("--N", dest="N", type=int, help="receive antennas")
    group.add_argument("--T", dest="T", type=int, help="block length")
    group.add_argument("--rho", type=float, help="SNR (linear)")
    group.add_argument("--H", dest="H", help="known channel matrix (JSON or I<n>)")
    group.add_argument("--beta", type=float, help="fractional-log exponent in (0, 1)")
    group.add_argument("--c-beta", dest="c_beta", type=float, help="fractional-log constant")
    group.add_argument("--taps", help="multipath power profile (comma list)")


def add_gauge_arguments(
    parser: argparse.ArgumentParser, divergence_factor: bool = False
) -> None:
    """Decision thresholds of gauge identification, defaulting to the settings."""
    group = parser.add_argument_group("gauge identification")
    group.add_argument(
        "--drift-threshold",
        dest="drift_threshold",
        type=float,
        default=analysis_config.drift_threshold,
        help="largest ratio drift that still identifies a gauge (default %(default)s)",
    )
    if divergence_factor:
        group.add_argument(
            "--divergence-factor",
            dest="divergence_factor",
            type=float,
            default=analysis_config.divergence_factor,
            help="ratio growth that makes a tradeoff cross-gauge (default %(default)s)",
        )


def load_spec(args: argparse.Namespace) -> ChannelSpec:
    """Build a ``ChannelSpec`` from ``--spec`` and the inline channel flags.

    Inline flags override fields read from the document.
    """
    document: dict[str, Any] = {}
    if getattr(args, "spec", None):
        document = load_channel_spec(args.spec).to_dict()

    for key in ("kind", "M", "N", "T", "rho", "beta", "c_beta"):
        value = getattr(args, key, None)
        if value is not None:
            document[key] = value
    if getattr(args, "H", None):
        H = parse_matrix(args.H, "H")
        document["H_re"] = H.real.tolist()
        document["H_im"] = H.imag.tolist()
        if args.M is None:
            document["M"] = H.shape[1]
        if args.N is None:
            document["N"] = H.shape[0]
    if getattr(args, "taps", None):
        document["taps"] = parse_vector(args.taps, "taps").tolist()

    if "kind" not in document:
        raise ValidationError("a channel kind is required (--kind or --spec)", "kind")
    return ChannelSpec.from_dict(document)


def rho_grid(args: argparse.Namespace) -> RhoGrid:
    return RhoGrid.parse(args.rho_grid)


def write_result(
    args: argparse.Namespace,
    command: str,
    data: Any,
    rows: Sequence[dict[str, Any]] | None = None,
    columns: Sequence[str] | None = None,
) -> None:
    """Emit ``data`` as a JSON document, or ``rows`` as CSV.

    Commands without a natural table fall back to a single CSV row built
    from the top-level scalar fields of ``data``.
    """
    config = resolved_config(args)
    if args.format == "csv":
        if rows is None:
            source = data.to_dict() if hasattr(data, "to_dict") else dict(data)
            rows = [
                {key: value for key, value in source.items() if not isinstance(value, dict | list)}
            ]
        text = format_csv(rows, config, columns)
    else:
        text = dump_json(format_document(command, config, data))
    emit(text, args.out)


def add_codebook_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("codebook")
    group.add_argument("--K", dest="K", type=int, help="size of the default codebook")
    group.add_argument("--codebook", help="JSON file with codebook points")
    group.add_argument(
        "--search-trials",
        dest="search_trials",
        type=int,
        default=16,
        help="random restarts when searching for a default codebook",
    )


def _points_from(document: Any) -> Any:
    if not isinstance(document, dict):
        return document
    for key in ("points", "certificate"):
        if document.get(key) is not None:
            return document[key]
    for key in ("data", "packing"):
        if isinstance(document.get(key), dict):
            return _points_from(document[key])
    return None


def resolve_codebook(args: argparse.Namespace, spec: ChannelSpec) -> Codebook:
    """Codebook read from ``--codebook`` or built for ``--K`` codewords.

    The file may hold a bare list of points, ``{"points": [...]}``, or a
    ``pack``/``frontier`` result whose data carries a certificate.
    """
    if args.codebook:
        path = Path(args.codebook)
        try:
            document: Any = json.loads(path.read_text())
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigurationError(
                f"Cannot read codebook: {e}", config_key="codebook", config_value=str(path)
            ) from e
        points = _points_from(document)
        if points is None:
            raise ConfigurationError("codebook file holds no points", config_key="codebook")
        return codebook_for(spec, parse_points(points))
    if args.K is None:
        raise ValidationError("--K or --codebook is required", "K")
    return default_codebook(spec, args.K, args.seed, args.search_trials)
