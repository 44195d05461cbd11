"""Channel specifications and their JSON document codec.

A ``ChannelSpec`` names one of the six supported channel classes together
with its parameters. Documents use the field names ``kind, M, N, T, rho,
H_re, H_im, beta, c_beta, taps``; fields that a class does not use may be
omitted.
"""

import functools
import json
import math
from dataclasses import dataclass, field, replace
from enum import StrEnum
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from ..utils.exceptions import ConfigurationError, ValidationError
from ..utils.logging import get_logger
from .settings import analysis_config


logger = get_logger(__name__)


class ChannelKind(StrEnum):
    FIXED_H = "FixedH"
    COHERENT_MIMO = "CoherentMIMO"
    BLOCK_FADING = "BlockFading"
    FAST_FADING = "FastFading"
    MULTIPATH = "Multipath"
    FRAC_LOG = "FracLog"

    @classmethod
    def parse(cls, value: str) -> "ChannelKind":
        normalized = value.replace("-", "").replace("_", "").lower()
        for kind in cls:
            if kind.value.lower() == normalized:
                return kind
        raise ValidationError(
            f"Unknown channel kind: {value}",
            "kind",
            value,
            f"one of {', '.join(k.value for k in cls)}",
        )


SCALE_KINDS = frozenset({ChannelKind.FAST_FADING, ChannelKind.MULTIPATH})


@dataclass(frozen=True)
class ChannelSpec:
    """Tagged description of one channel class."""

    kind: ChannelKind
    M: int = 1
    N: int = 1
    T: int = 1
    rho: float = 1.0
    H: NDArray[np.complex128] | None = field(default=None, compare=False)
    beta: float | None = None
    c_beta: float | None = None
    taps: tuple[float, ...] | None = None

    def __post_init__(self) -> None:
        validate_channel_spec(self)

    @property
    def is_scale_family(self) -> bool:
        return self.kind in SCALE_KINDS

    @property
    def log2_rho(self) -> float:
        return math.log2(self.rho)

    def with_rho(self, rho: float) -> "ChannelSpec":
        return replace(self, rho=rho)

    def to_dict(self) -> dict[str, Any]:
        document: dict[str, Any] = {
            "kind": self.kind.value,
            "M": self.M,
            "N": self.N,
            "T": self.T,
            "rho": self.rho,
        }
        if self.H is not None:
            document["H_re"] = self.H.real.tolist()
            document["H_im"] = self.H.imag.tolist()
        if self.beta is not None:
            document["beta"] = self.beta
        if self.c_beta is not None:
            document["c_beta"] = self.c_beta
        if self.taps is not None:
            document["taps"] = list(self.taps)
        return document

    @classmethod
    def from_dict(cls, document: dict[str, Any]) -> "ChannelSpec":
        if "kind" not in document:
            raise ValidationError("channel document needs a kind", "kind")
        kind = ChannelKind.parse(str(document["kind"]))

        H = None
        if "H_re" in document:
            H = np.asarray(document["H_re"], dtype=float).astype(complex)
            if "H_im" in document:
                H = H + 1j * np.asarray(document["H_im"], dtype=float)
        elif "H_im" in document:
            raise ValidationError("H_im given without H_re", "H_re")

        taps = document.get("taps")
        c_beta = document.get("c_beta")
        if kind is ChannelKind.FRAC_LOG and c_beta is None:
            c_beta = analysis_config.c_beta

        defaults = {"M": 1, "N": 1, "T": 1}
        if H is not None:
            defaults = {"M": H.shape[1], "N": H.shape[0], "T": 1}
        return cls(
            kind=kind,
            M=int(document.get("M", defaults["M"])),
            N=int(document.get("N", defaults["N"])),
            T=int(document.get("T", defaults["T"])),
            rho=float(document.get("rho", 1.0)),
            H=H,
            beta=None if document.get("beta") is None else float(document["beta"]),
            c_beta=None if c_beta is None else float(c_beta),
            taps=None if taps is None else tuple(float(t) for t in taps),
        )


def _require_int(value: Any, name: str, minimum: int = 1) -> None:
    if isinstance(value, bool) or not isinstance(value, int | np.integer) or value < minimum:
        raise ValidationError(
            f"{name} must be an integer >= {minimum}", name, value, f"{name} >= {minimum}"
        )


def validate_channel_spec(spec: ChannelSpec) -> None:
    """Check the per-class parameter requirements of ``spec``."""
    _require_int(spec.M, "M")
    _require_int(spec.N, "N")
    _require_int(spec.T, "T")
    if not (math.isfinite(spec.rho) and spec.rho > 0):
        raise ValidationError("rho must be positive and finite", "rho", spec.rho, "rho > 0")

    if spec.kind is ChannelKind.FIXED_H:
        if spec.H is None:
            raise ValidationError("FixedH needs a channel matrix H", "H")
        if spec.H.shape != (spec.N, spec.M):
            raise ValidationError(
                "H must be N x M", "H", spec.H.shape, f"shape ({spec.N}, {spec.M})"
            )
        if not np.any(spec.H):
            raise ValidationError("H must be nonzero", "H")

    if spec.kind in SCALE_KINDS and (spec.M != 1 or spec.T != 1):
        raise ValidationError(
            "fast fading is a single-input, single-use channel", "T", spec.T, "M = T = 1"
        )

    if spec.kind is ChannelKind.MULTIPATH:
        taps = np.asarray(spec.taps or (), dtype=float)
        if taps.size == 0 or np.any(taps < 0) or not np.any(taps > 0):
            raise ValidationError(
                "multipath needs nonnegative taps with at least one positive",
                "taps",
                spec.taps,
            )

    if spec.kind is ChannelKind.FRAC_LOG:
        if spec.beta is None or not 0.0 < spec.beta < 1.0:
            raise ValidationError("beta must lie in (0, 1)", "beta", spec.beta, "0 < beta < 1")
        if spec.c_beta is None or not spec.c_beta > 0:
            raise ValidationError("c_beta must be positive", "c_beta", spec.c_beta)

    if spec.kind is ChannelKind.BLOCK_FADING and spec.M < spec.T < 2 * spec.M:
        _warn_partial_opening(spec.M, spec.T)


@functools.cache
def _warn_partial_opening(M: int, T: int) -> None:
    logger.warning(
        "Block fading with M < T < 2M: only T - M principal angles can open",
        extra_data={"M": M, "T": T},
    )


def load_channel_spec(path: str | Path) -> ChannelSpec:
    """Read a ChannelSpec JSON document from ``path``."""
    try:
        document = json.loads(Path(path).read_text())
    except OSError as e:
        raise ConfigurationError(f"Cannot read channel spec: {e}", "spec", str(path)) from e
    except json.JSONDecodeError as e:
        raise ConfigurationError(f"Invalid channel spec JSON: {e}", "spec", str(path)) from e
    if not isinstance(document, dict):
        raise ConfigurationError("Channel spec must be a JSON object", "spec", str(path))
    return ChannelSpec.from_dict(document.get("spec", document))
