"""Gauge identification, gauge-DOF, B-diversity and tradeoff classification.

SNR grids are carried as ``log2 rho`` so sweeps can reach ``rho = 10^300``.
A gauge is read off a sweep by dividing the values by each candidate
function and keeping the candidate whose ratio has settled the most over
the upper half of the grid.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np
from numpy.typing import NDArray

from ..config.channel import SCALE_KINDS, ChannelKind, ChannelSpec
from ..config.settings import analysis_config
from ..utils.exceptions import ConfigurationError, UnsupportedSpecError, ValidationError
from ..utils.logging import get_logger
from .channels import effective_scale_spec, numerical_rank, pair_frontier, szego_integral
from .divergence import LN2, log2_one_plus
from .packing import frontier_bounds, pack_count
from .streams import parallel_map


logger = get_logger(__name__)

LOG2_10 = math.log2(10.0)
MAX_LOG10_RHO = 307.0
EXACT_SIZE_LIMIT = 60.0

Sample = tuple[float, float]


class GaugeFamily(StrEnum):
    LOG = "log"
    LOGLOG = "loglog"
    POW_LOG = "pow-log"
    POW = "pow"
    CONST = "const"


@dataclass(frozen=True)
class GaugeCandidate:
    """One gauge function of the candidate menu, evaluated in log2."""

    family: GaugeFamily
    parameter: float | None = None

    def __post_init__(self) -> None:
        if self.family is GaugeFamily.POW_LOG and not (
            self.parameter is not None and 0.0 < self.parameter < 1.0
        ):
            raise ValidationError("pow-log needs beta in (0, 1)", "parameter", self.parameter)
        if self.family is GaugeFamily.POW and not (
            self.parameter is not None and self.parameter > 0.0
        ):
            raise ValidationError("pow needs a positive exponent", "parameter", self.parameter)

    @property
    def label(self) -> str:
        if self.parameter is None:
            return self.family.value
        return f"{self.family.value}({self.parameter:g})"

    def log2_value(self, log2_rho: NDArray[np.float64]) -> NDArray[np.float64]:
        """``log2 g(rho)`` for an array of ``log2 rho`` values (``rho > 2``)."""
        x = np.asarray(log2_rho, dtype=float)
        match self.family:
            case GaugeFamily.LOG:
                return np.log2(x)
            case GaugeFamily.LOGLOG:
                return np.log2(np.log2(x))
            case GaugeFamily.POW_LOG:
                return float(self.parameter or 0.0) * np.log2(x)
            case GaugeFamily.POW:
                return float(self.parameter or 0.0) * x
        return np.zeros_like(x)

    def to_dict(self) -> dict[str, Any]:
        return {"family": self.family.value, "parameter": self.parameter, "label": self.label}


def default_candidates(
    extra_betas: Sequence[float] = (), extra_powers: Sequence[float] = ()
) -> list[GaugeCandidate]:
    """The candidate menu: log, loglog, pow-log on the beta grid, pow, const."""
    betas = sorted({round(b, 12) for b in (*analysis_config.beta_grid, *extra_betas) if 0 < b < 1})
    powers = sorted({round(a, 12) for a in (*analysis_config.power_grid, *extra_powers) if a > 0})
    return [
        GaugeCandidate(GaugeFamily.LOG),
        GaugeCandidate(GaugeFamily.LOGLOG),
        *(GaugeCandidate(GaugeFamily.POW_LOG, b) for b in betas),
        *(GaugeCandidate(GaugeFamily.POW, a) for a in powers),
        GaugeCandidate(GaugeFamily.CONST),
    ]


@dataclass
class GaugeReading:
    """Winning gauge of a sweep with its coefficient and drift diagnostics."""

    best: GaugeCandidate | None
    coefficient: float
    drift: float
    margin: float
    status: str
    log2_rho: list[float]
    ratios: list[float]
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def identified(self) -> bool:
        return self.status == "identified"

    def to_dict(self) -> dict[str, Any]:
        return {
            "best": None if self.best is None else self.best.to_dict(),
            "coefficient": self.coefficient,
            "drift": self.drift,
            "margin": self.margin,
            "status": self.status,
            "log2_rho": self.log2_rho,
            "ratios": self.ratios,
            "diagnostics": self.diagnostics,
        }


def _inconclusive(reason: str, samples: Sequence[Sample], **extra: Any) -> GaugeReading:
    return GaugeReading(
        best=None,
        coefficient=math.nan,
        drift=math.nan,
        margin=math.nan,
        status="inconclusive",
        log2_rho=[s[0] for s in samples],
        ratios=[],
        diagnostics={"reason": reason, **extra},
    )


def _validate_samples(samples: Sequence[Sample]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
    minimum = analysis_config.min_grid_points
    if len(samples) < minimum:
        raise ValidationError(
            f"gauge identification needs at least {minimum} samples",
            "samples",
            len(samples),
            f">= {minimum}",
        )
    log2_rho = np.array([s[0] for s in samples], dtype=float)
    values = np.array([s[1] for s in samples], dtype=float)
    if np.any(np.diff(log2_rho) <= 0):
        raise ValidationError("rho must be strictly increasing", "samples")
    if log2_rho[0] <= 1.0:
        raise ValidationError("gauges are evaluated for rho > 2", "samples", float(log2_rho[0]))
    if not np.all(np.isfinite(values)) or np.any(values <= 0):
        raise ValidationError("sweep values must be positive and finite", "samples")
    return log2_rho, values


def identify_gauge(
    samples: Sequence[Sample],
    candidates: Sequence[GaugeCandidate] | None = None,
    drift_threshold: float | None = None,
    require_monotone: bool = True,
) -> GaugeReading:
    """Pick the candidate whose ratio ``value / g(rho)`` settles the most.

    ``samples`` are ``(log2 rho, value)`` pairs. The drift of a candidate is
    ``|r_last / r_mid - 1|`` with ``r_mid`` taken at the middle of the grid;
    the coefficient is ``r_last``. Ties go to the earlier candidate.
    """
    log2_rho, values = _validate_samples(samples)
    menu = list(candidates) if candidates is not None else default_candidates()
    threshold = analysis_config.drift_threshold if drift_threshold is None else drift_threshold
    if not 0 < threshold < 1:
        raise ValidationError(
            "drift threshold must lie in (0, 1)", "drift_threshold", threshold, "0 < t < 1"
        )
    mid = len(values) // 2
    log2_values = np.log2(values)

    drifts: dict[str, float] = {}
    ranked: list[tuple[float, int]] = []
    for index, candidate in enumerate(menu):
        log2_ratio = log2_values - candidate.log2_value(log2_rho)
        drift = abs(math.expm1((log2_ratio[-1] - log2_ratio[mid]) * LN2))
        drifts[candidate.label] = drift
        ranked.append((drift, index))
    ranked.sort()

    best_drift, best_index = ranked[0]
    best = menu[best_index]
    margin = ranked[1][0] - best_drift if len(ranked) > 1 else math.inf
    log2_ratio = log2_values - best.log2_value(log2_rho)
    ratios = np.exp2(log2_ratio)

    steps = np.diff(values)
    monotone = bool(np.all(steps >= 0) or np.all(steps <= 0))
    status = "identified"
    if best_drift > threshold:
        status = "inconclusive"
    if require_monotone and not monotone:
        status = "inconclusive"

    logger.debug(
        "Gauge identification",
        extra_data={"best": best.label, "drift": best_drift, "margin": margin, "status": status},
    )
    return GaugeReading(
        best=best,
        coefficient=float(ratios[-1]),
        drift=best_drift,
        margin=margin,
        status=status,
        log2_rho=log2_rho.tolist(),
        ratios=ratios.tolist(),
        diagnostics={"drifts": drifts, "monotone": monotone, "threshold": threshold},
    )


@dataclass(frozen=True)
class RhoGrid:
    """Log-spaced SNR grid in decades, ``start:stop:points``."""

    log10_start: float
    log10_stop: float
    points: int

    def __post_init__(self) -> None:
        if self.points < 2:
            raise ValidationError("a grid needs at least two points", "points", self.points)
        if not 0.0 < self.log10_start < self.log10_stop <= MAX_LOG10_RHO:
            raise ValidationError(
                "grid must satisfy 0 < start < stop <= 307 (decades)",
                "rho_grid",
                f"{self.log10_start}:{self.log10_stop}",
            )

    @classmethod
    def parse(cls, text: str) -> "RhoGrid":
        parts = text.split(":")
        if len(parts) != 3:
            raise ValidationError(
                "rho grid must look like start:stop:points", "rho_grid", text, "start:stop:points"
            )
        try:
            return cls(float(parts[0]), float(parts[1]), int(parts[2]))
        except ValueError as e:
            raise ValidationError(f"malformed rho grid: {e}", "rho_grid", text) from e

    @property
    def decades(self) -> float:
        return self.log10_stop - self.log10_start

    def log2_values(self) -> NDArray[np.float64]:
        return np.linspace(self.log10_start, self.log10_stop, self.points) * LOG2_10

    def rho_values(self) -> NDArray[np.float64]:
        return np.power(10.0, np.linspace(self.log10_start, self.log10_stop, self.points))

    def __str__(self) -> str:
        return f"{self.log10_start:g}:{self.log10_stop:g}:{self.points}"


def _require_span(grid: RhoGrid) -> None:
    if grid.decades < analysis_config.min_grid_decades:
        raise ValidationError(
            f"grid must span at least {analysis_config.min_grid_decades:g} decades",
            "rho_grid",
            str(grid),
        )


def read_sweep(path: str | Path) -> list[Sample]:
    """Read offline CSV sweeps with a ``value`` column.

    The SNR column may be ``rho``, ``log2_rho`` or ``log10_rho``. Lines
    starting with ``#`` (such as the config header of CSV results) are
    skipped.
    """
    try:
        lines = [
            line
            for line in Path(path).read_text().splitlines()
            if line.strip() and not line.lstrip().startswith("#")
        ]
        table = np.genfromtxt(lines, delimiter=",", names=True, dtype=float)
    except (OSError, ValueError) as e:
        raise ConfigurationError(f"Cannot read sweep: {e}", "sweep", str(path)) from e
    names = table.dtype.names or ()
    if "value" not in names or not ({"rho", "log2_rho", "log10_rho"} & set(names)):
        raise ConfigurationError(
            "sweep needs a value column and a rho, log2_rho or log10_rho column",
            "sweep",
            str(path),
        )
    rows = np.atleast_1d(table)
    if "log2_rho" in names:
        log2_rho = rows["log2_rho"]
    elif "log10_rho" in names:
        log2_rho = rows["log10_rho"] * LOG2_10
    else:
        log2_rho = np.log2(rows["rho"])
    return [(float(a), float(b)) for a, b in zip(log2_rho, rows["value"])]


# ---------------------------------------------------------------------------
# Normalization conventions
# ---------------------------------------------------------------------------


def _rank(spec: ChannelSpec) -> int:
    if spec.kind is ChannelKind.FIXED_H:
        assert spec.H is not None
        return numerical_rank(spec.H)
    return min(spec.M, spec.N)


def load_range(spec: ChannelSpec) -> tuple[float, float]:
    """Admissible loads ``r`` per channel class."""
    match spec.kind:
        case ChannelKind.FIXED_H | ChannelKind.COHERENT_MIMO:
            return 0.0, float(_rank(spec))
        case ChannelKind.FRAC_LOG:
            return 0.0, spec.N / 2.0
    return 0.0, 1.0


def load_log2_size(spec: ChannelSpec, r: float, log2_rho: float) -> float:
    """``log2 K`` of the codebook a load ``r`` prescribes at ``rho = 2^log2_rho``."""
    low, high = load_range(spec)
    if not low <= r <= high:
        raise ValidationError(
            f"load r must lie in [{low:g}, {high:g}] for {spec.kind.value}",
            "r",
            r,
            f"{low:g} <= r <= {high:g}",
        )
    match spec.kind:
        case ChannelKind.FIXED_H:
            return r * log2_rho
        case ChannelKind.COHERENT_MIMO:
            return r * spec.M * log2_rho
        case ChannelKind.BLOCK_FADING:
            return r * spec.M * max(spec.T - spec.M, 0) * log2_rho
        case ChannelKind.FAST_FADING | ChannelKind.MULTIPATH:
            return r * math.log2(log2_rho)
    assert spec.beta is not None
    return r * log2_rho**spec.beta


def load_codebook_size(spec: ChannelSpec, r: float, log2_rho: float) -> int:
    """``K = max(2, ceil(2^{r g(rho)}))``."""
    size = load_log2_size(spec, r, log2_rho)
    if size > EXACT_SIZE_LIMIT:
        raise ValidationError(
            "codebook too large to enumerate; use the log2 size", "r", r
        )
    return max(2, math.ceil(2.0**size))


# ---------------------------------------------------------------------------
# Gauge-DOF and B-diversity
# ---------------------------------------------------------------------------


def _k_pack(spec: ChannelSpec, delta: float, sample_budget: int, seed: int) -> tuple[float, dict[str, Any]]:
    """Per-symbol packing complexity and any diagnostics worth keeping."""
    if spec.kind is ChannelKind.BLOCK_FADING and spec.M != 1:
        raise UnsupportedSpecError(
            "block-fading gauge-DOF is available for M = 1 only",
            spec.kind.value,
            "gauge_dof",
        )
    result = pack_count(spec, delta, sample_budget=sample_budget, seed=seed)
    symbols = 1 if spec.is_scale_family else spec.T
    info: dict[str, Any] = {}
    upper = result.k_pack_upper
    if not spec.is_scale_family and upper is not None and math.isfinite(upper):
        info["upper"] = upper / symbols
    if "budget_exhausted" in result.diagnostics:
        info["budget_exhausted"] = result.diagnostics["budget_exhausted"]
    return float(result.k_pack_lower or 0.0) / symbols, info


def _extra_betas(spec: ChannelSpec) -> tuple[float, ...]:
    return (spec.beta,) if spec.beta is not None else ()


def gauge_dof(
    spec: ChannelSpec,
    delta: float,
    grid: RhoGrid,
    sample_budget: int = 2**14,
    seed: int = 0,
    threads: int | None = None,
    drift_threshold: float | None = None,
) -> GaugeReading:
    """Read the packing complexity ``K_pack(delta; rho)`` on its own gauge."""
    _require_span(grid)
    if not delta > 0:
        raise ValidationError("delta must be positive", "delta", delta, "delta > 0")
    log2_grid = grid.log2_values()

    def point(log2_rho: float) -> tuple[float, dict[str, Any]]:
        return _k_pack(spec.with_rho(2.0**log2_rho), delta, sample_budget, seed)

    computed = parallel_map(point, log2_grid.tolist(), threads)
    samples = [
        (float(x), value) for x, (value, _) in zip(log2_grid, computed) if value > 0
    ]
    extra = {
        "kind": spec.kind.value,
        "delta": delta,
        "values": [value for value, _ in computed],
        "per_point": [info for _, info in computed],
    }
    if len(samples) < analysis_config.min_grid_points:
        return _inconclusive("too few positive packing complexities", samples, **extra)
    reading = identify_gauge(
        samples, default_candidates(_extra_betas(spec)), drift_threshold=drift_threshold
    )
    reading.diagnostics.update(extra)
    if any(info.get("budget_exhausted") for _, info in computed):
        reading.diagnostics["budget_exhausted"] = True
    return reading


def b_diversity(
    spec: ChannelSpec,
    r: float,
    grid: RhoGrid,
    trials: int = 16,
    seed: int = 0,
    threads: int | None = None,
    drift_threshold: float | None = None,
) -> GaugeReading:
    """Read the certified frontier at load ``r`` on its diversity gauge."""
    if spec.kind is ChannelKind.FRAC_LOG and r > 0:
        raise UnsupportedSpecError(
            "the fractional-log tradeoff is only available at r = 0",
            spec.kind.value,
            "b_diversity",
        )
    log2_grid = grid.log2_values()

    def point(log2_rho: float) -> tuple[float, float, float]:
        size = load_log2_size(spec, r, log2_rho)
        rated = spec.with_rho(2.0**log2_rho)
        if size <= EXACT_SIZE_LIMIT:
            K = max(2, math.ceil(2.0**size))
            result = frontier_bounds(rated, K=K, trials=trials, seed=seed, threads=1)
            return math.log2(K), result.value_lower, result.value_upper
        result = frontier_bounds(rated, log2_k=size, trials=trials, seed=seed, threads=1)
        return size, result.value_lower, result.value_upper

    computed = parallel_map(point, log2_grid.tolist(), threads)
    samples = [(float(x), lower) for x, (_, lower, _) in zip(log2_grid, computed)]

    extra_powers: tuple[float, ...] = ()
    if spec.kind is ChannelKind.FIXED_H:
        extra_powers = (1.0 - r / (_rank(spec) * spec.T),)
    extra_betas = _extra_betas(spec)
    if spec.kind in SCALE_KINDS and 0 < r < 1:
        extra_betas = (*extra_betas, 1.0 - r)

    extra = {
        "kind": spec.kind.value,
        "r": r,
        "log2_k": [k for k, _, _ in computed],
        "upper": [u for _, _, u in computed],
    }
    if any(lower <= 0 for _, lower in samples):
        return _inconclusive("nonpositive frontier lower bound", samples, **extra)
    reading = identify_gauge(
        samples,
        default_candidates(extra_betas, extra_powers),
        drift_threshold=drift_threshold,
        require_monotone=False,
    )
    reading.diagnostics.update(extra)
    return reading


# ---------------------------------------------------------------------------
# Tradeoff classification
# ---------------------------------------------------------------------------


def capacity_proxy(spec: ChannelSpec) -> float:
    """Closed-form capacity scaling of ``spec`` at its SNR, in bits."""
    match spec.kind:
        case ChannelKind.FIXED_H | ChannelKind.COHERENT_MIMO:
            return _rank(spec) * log2_one_plus(spec.log2_rho)
        case ChannelKind.FAST_FADING | ChannelKind.MULTIPATH:
            return math.log2(math.log2(effective_scale_spec(spec).rho))
        case ChannelKind.BLOCK_FADING:
            if spec.T <= spec.M:
                raise UnsupportedSpecError(
                    "block fading with T <= M carries no subspace information",
                    spec.kind.value,
                    "classify_tradeoff",
                )
            return spec.M * (spec.T - spec.M) / spec.T * spec.log2_rho
    assert spec.beta is not None and spec.c_beta is not None
    return szego_integral(spec.beta, spec.c_beta, 1.0, spec.rho)


@dataclass
class TradeoffReport:
    """Same-gauge versus cross-gauge verdict from the ratio trace.

    ``rate_reading`` is the packing complexity ``K_pack(delta)`` read on its
    gauge; ``capacity_reading`` reads the capacity proxy the ratio is taken
    against; ``diversity_reading`` reads the pair frontier.
    """

    kind: str
    verdict: str
    growth: float
    elasticity: float
    log2_rho: list[float]
    pair_frontier: list[float]
    capacity: list[float]
    ratio_trace: list[float]
    rationale: str
    rate_reading: GaugeReading | None = None
    capacity_reading: GaugeReading | None = None
    diversity_reading: GaugeReading | None = None

    def to_dict(self) -> dict[str, Any]:
        def reading(value: GaugeReading | None) -> dict[str, Any] | None:
            return None if value is None else value.to_dict()

        return {
            "kind": self.kind,
            "type": self.verdict,
            "growth": self.growth,
            "elasticity": self.elasticity,
            "log2_rho": self.log2_rho,
            "pair_frontier": self.pair_frontier,
            "capacity": self.capacity,
            "ratio_trace": self.ratio_trace,
            "rationale": self.rationale,
            "rate_reading": reading(self.rate_reading),
            "capacity_reading": reading(self.capacity_reading),
            "diversity_reading": reading(self.diversity_reading),
        }


def _reading_or_none(
    samples: list[Sample], drift_threshold: float | None
) -> GaugeReading | None:
    try:
        return identify_gauge(samples, drift_threshold=drift_threshold, require_monotone=False)
    except ValidationError:
        return None


def _rate_reading(
    spec: ChannelSpec,
    grid: RhoGrid,
    delta: float,
    threads: int | None,
    drift_threshold: float | None,
) -> GaugeReading | None:
    # Expurgated random-coding counts are lower bounds only
    if spec.kind is ChannelKind.FRAC_LOG or (
        spec.kind is ChannelKind.BLOCK_FADING and spec.M != 1
    ):
        return None
    try:
        return gauge_dof(spec, delta, grid, threads=threads, drift_threshold=drift_threshold)
    except ValidationError:
        return None


def classify_tradeoff(
    spec: ChannelSpec,
    grid: RhoGrid,
    threads: int | None = None,
    divergence_factor: float | None = None,
    drift_threshold: float | None = None,
    rate_delta: float = 1.0,
) -> TradeoffReport:
    """Compare the pair frontier with the capacity proxy over ``grid``.

    The ratio trace ``Delta*(2) / C`` is same-gauge when its growth over the
    upper half of the grid stays inside the configured band, and
    cross-gauge when it grows by more than the divergence factor or its
    elasticity against ``log2 rho`` reaches the configured threshold.
    The rate gauge is read from ``K_pack(rate_delta)`` over the same grid.
    """
    factor = analysis_config.divergence_factor if divergence_factor is None else divergence_factor
    if not factor > 1:
        raise ValidationError(
            "divergence factor must exceed 1", "divergence_factor", factor, "factor > 1"
        )
    log2_grid = grid.log2_values()

    def point(log2_rho: float) -> tuple[float, float]:
        rated = spec.with_rho(2.0**log2_rho)
        return pair_frontier(rated), capacity_proxy(rated)

    computed = parallel_map(point, log2_grid.tolist(), threads)
    frontier = [d for d, _ in computed]
    capacity = [c for _, c in computed]
    ratios = [d / c if c > 0 else math.inf for d, c in computed]

    short = (
        grid.points < analysis_config.min_grid_points
        or grid.decades < analysis_config.min_grid_decades
    )
    mid = len(ratios) // 2
    growth = ratios[-1] / ratios[mid] if ratios[mid] > 0 else math.inf
    span = math.log(log2_grid[-1] / log2_grid[mid])
    elasticity = math.log(growth) / span if growth > 0 and span > 0 else math.nan

    band = analysis_config.same_gauge_band
    if short:
        verdict, rationale = "inconclusive", "grid too short for a verdict"
    elif abs(growth - 1.0) <= band:
        verdict, rationale = "same-gauge", f"ratio settled within {band:g} over the upper half"
    elif growth > factor or elasticity >= analysis_config.cross_elasticity:
        verdict, rationale = "cross-gauge", (
            f"ratio grew by {growth:.3g} with elasticity {elasticity:.3g} against log2 rho"
        )
    else:
        verdict, rationale = "inconclusive", "ratio neither bounded nor clearly divergent"

    logger.info(
        "Tradeoff classified",
        extra_data={"kind": spec.kind.value, "verdict": verdict, "growth": growth},
    )
    log2_list = log2_grid.tolist()
    return TradeoffReport(
        kind=spec.kind.value,
        verdict=verdict,
        growth=growth,
        elasticity=elasticity,
        log2_rho=log2_list,
        pair_frontier=frontier,
        capacity=capacity,
        ratio_trace=ratios,
        rationale=rationale,
        rate_reading=_rate_reading(spec, grid, rate_delta, threads, drift_threshold),
        capacity_reading=_reading_or_none(list(zip(log2_list, capacity)), drift_threshold),
        diversity_reading=_reading_or_none(list(zip(log2_list, frontier)), drift_threshold),
    )



# ---------------------------------------------------------------------------
# Diversity-multiplexing comparison
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DmtPoint:
    r: Fraction
    d_bh: Fraction
    d_star: Fraction
    gap: Fraction
    vacuous: bool

    def to_dict(self) -> dict[str, Any]:
        return {
            "r": self.r,
            "d_bh": self.d_bh,
            "d_star": self.d_star,
            "gap": self.gap,
            "vacuous": self.vacuous,
        }


def _as_fraction(value: float | int | str | Fraction) -> Fraction:
    if isinstance(value, float):
        return Fraction(repr(value))
    return Fraction(value)


def dmt_compare(M: int, N: int, r: float | int | str | Fraction) -> DmtPoint:
    """Union-Bhattacharyya line against the optimal DMT curve, exactly."""
    if M < 1 or N < 1:
        raise ValidationError("M and N must be positive", "M", (M, N))
    load = _as_fraction(r)
    if not 0 <= load <= min(M, N):
        raise ValidationError(
            "multiplexing gain must lie in [0, min(M, N)]", "r", str(load), f"0 <= r <= {min(M, N)}"
        )
    d_bh = M * N - load * (M + N)
    d_star = (M - load) * (N - load)
    return DmtPoint(
        r=load,
        d_bh=d_bh,
        d_star=d_star,
        gap=d_star - d_bh,
        vacuous=load > Fraction(M * N, M + N),
    )
