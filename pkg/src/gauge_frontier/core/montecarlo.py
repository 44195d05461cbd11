"""Monte Carlo maximum-likelihood decoding against the union bound.

Trials are split into fixed-size chunks, and every chunk draws from its own
substream keyed by ``(seed, stream, chunk)``. Error counts are integers, so
the reduction is exact and the result does not depend on the worker count.
"""

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import linalg, stats

from ..config.channel import ChannelKind, ChannelSpec
from ..config.settings import simulation_config
from ..utils.exceptions import NumericalError, UnsupportedSpecError, ValidationError
from ..utils.logging import get_logger
from .channels import effective_scale_spec
from .codebook import Codebook
from .divergence import avg_bhatt_rayleigh, difference_eigenvalues
from .streams import chunk_sizes, parallel_map, substream, validate_seed


logger = get_logger(__name__)

SIMULATED_KINDS = frozenset(
    {
        ChannelKind.FAST_FADING,
        ChannelKind.MULTIPATH,
        ChannelKind.FIXED_H,
        ChannelKind.COHERENT_MIMO,
        ChannelKind.BLOCK_FADING,
    }
)

Decoder = Callable[[np.random.Generator, int], int]


@dataclass
class SimConfig:
    """One simulation request: a codebook used ``n`` times over ``spec``."""

    spec: ChannelSpec
    codebook: Codebook
    n: int = 1
    trials: int = 100_000
    seed: int = 0
    confidence: float | None = None
    stream: int = 0
    threads: int | None = None
    auto_escalate: bool | None = None

    def __post_init__(self) -> None:
        if self.spec.kind not in SIMULATED_KINDS:
            raise UnsupportedSpecError(
                "Monte Carlo decoding is not available for fractional-log channels",
                self.spec.kind.value,
                "simulate",
            )
        if self.n < 1:
            raise ValidationError("n must be at least 1", "n", self.n, "n >= 1")
        minimum = simulation_config.min_trials
        if self.trials < minimum:
            raise ValidationError(
                f"at least {minimum} trials are required", "trials", self.trials, f">= {minimum}"
            )
        validate_seed(self.seed)
        self.codebook.check_power()
        if self.confidence is None:
            self.confidence = simulation_config.confidence
        if self.confidence < 0:
            raise ValidationError(
                "confidence must be nonnegative", "confidence", self.confidence, ">= 0"
            )
        if self.auto_escalate is None:
            self.auto_escalate = simulation_config.auto_escalate


@dataclass
class SimResult:
    pe_hat: float
    stderr: float
    trials: int
    bound: float
    delta_min: float
    n: int
    K: int
    rho: float
    seed: int
    passed: bool
    status: str
    errors: int = 0

    def to_dict(self) -> dict[str, Any]:
        return {
            "pe_hat": self.pe_hat,
            "stderr": self.stderr,
            "trials": self.trials,
            "bound": self.bound,
            "delta_min": self.delta_min,
            "n": self.n,
            "K": self.K,
            "rho": self.rho,
            "seed": self.seed,
            "pass": self.passed,
            "status": self.status,
            "errors": self.errors,
        }


def _complex_normal(rng: np.random.Generator, shape: tuple[int, ...]) -> NDArray[np.complex128]:
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2.0)


def _scale_decoder(spec: ChannelSpec, codebook: Codebook, n: int) -> Decoder:
    """Energy-statistic ML decoding for the scale family.

    The sum of ``n N`` received energies under variance ``v`` is
    ``v * Gamma(n N, 1)``, and the log-likelihood depends on it alone.
    """
    samples = n * effective_scale_spec(spec).N
    variances = np.exp(codebook.points.astype(float))
    log_variances = codebook.points.astype(float)

    def run(rng: np.random.Generator, size: int) -> int:
        sent = rng.integers(len(variances), size=size)
        energy = variances[sent] * rng.gamma(samples, 1.0, size=size)
        likelihood = -samples * log_variances[None, :] - energy[:, None] / variances[None, :]
        return int(np.count_nonzero(np.argmax(likelihood, axis=1) != sent))

    return run


def _fixed_h_decoder(spec: ChannelSpec, codebook: Codebook, n: int) -> Decoder:
    assert spec.H is not None
    means = math.sqrt(spec.rho) * np.einsum("nm,kmt->knt", spec.H, codebook.points)

    def run(rng: np.random.Generator, size: int) -> int:
        sent = rng.integers(len(means), size=size)
        received = means[sent] + _complex_normal(rng, (size, *means.shape[1:])) / math.sqrt(n)
        gaps = np.sum(np.abs(received[:, None] - means[None]) ** 2, axis=(2, 3))
        return int(np.count_nonzero(np.argmin(gaps, axis=1) != sent))

    return run


def _coherent_decoder(spec: ChannelSpec, codebook: Codebook, n: int) -> Decoder:
    points = codebook.points
    amplitude = math.sqrt(spec.rho)

    def run(rng: np.random.Generator, size: int) -> int:
        sent = rng.integers(len(points), size=size)
        score = np.zeros((size, len(points)))
        for _ in range(n):
            H = _complex_normal(rng, (size, spec.N, spec.M))
            images = amplitude * np.einsum("snm,kmt->sknt", H, points)
            received = images[np.arange(size), sent] + _complex_normal(
                rng, (size, spec.N, spec.T)
            )
            score += np.sum(np.abs(received[:, None] - images) ** 2, axis=(2, 3))
        return int(np.count_nonzero(np.argmin(score, axis=1) != sent))

    return run


def _block_decoder(spec: ChannelSpec, codebook: Codebook, n: int) -> Decoder:
    """Covariance ML decoding; each received row is CN(0, rho X^T X* + I)."""
    points = codebook.points
    identity = np.eye(spec.T)
    covariances = [spec.rho * X.T @ X.conj() + identity for X in points]
    factors = [linalg.cho_factor(C, lower=True) for C in covariances]
    log_dets = np.array([2.0 * np.sum(np.log(np.abs(np.diag(f[0])))) for f in factors])
    inverses = np.stack([linalg.cho_solve(f, identity) for f in factors])
    rows = n * spec.N
    amplitude = math.sqrt(spec.rho)

    def run(rng: np.random.Generator, size: int) -> int:
        sent = rng.integers(len(points), size=size)
        gains = _complex_normal(rng, (size, rows, spec.M))
        received = amplitude * np.einsum("srm,smt->srt", gains, points[sent]) + _complex_normal(
            rng, (size, rows, spec.T)
        )
        quadratic = np.einsum("srt,ktu,sru->sk", received.conj(), inverses, received).real
        likelihood = -rows * log_dets[None, :] - quadratic
        return int(np.count_nonzero(np.argmax(likelihood, axis=1) != sent))

    return run


def _decoder(spec: ChannelSpec, codebook: Codebook, n: int) -> Decoder:
    match spec.kind:
        case ChannelKind.FAST_FADING | ChannelKind.MULTIPATH:
            return _scale_decoder(spec, codebook, n)
        case ChannelKind.FIXED_H:
            return _fixed_h_decoder(spec, codebook, n)
        case ChannelKind.COHERENT_MIMO:
            return _coherent_decoder(spec, codebook, n)
        case ChannelKind.BLOCK_FADING:
            return _block_decoder(spec, codebook, n)
    raise UnsupportedSpecError("no decoder for this channel kind", spec.kind.value, "simulate")


def _count_errors(
    decoder: Decoder, trials: int, seed: int, stream: int, threads: int | None
) -> int:
    sizes = chunk_sizes(trials, simulation_config.chunk_size)
    counts = parallel_map(
        lambda item: decoder(substream(seed, stream, item[0]), item[1]),
        list(enumerate(sizes)),
        threads,
    )
    return sum(counts)


def simulate_pe(config: SimConfig) -> SimResult:
    """Estimate the ML error probability and test it against the union bound."""
    codebook = config.codebook
    K = len(codebook)
    confidence = float(
        simulation_config.confidence if config.confidence is None else config.confidence
    )
    if K == 1:
        return SimResult(
            pe_hat=0.0,
            stderr=0.0,
            trials=config.trials,
            bound=0.0,
            delta_min=math.inf,
            n=config.n,
            K=1,
            rho=config.spec.rho,
            seed=config.seed,
            passed=True,
            status="pass",
        )

    delta_min = codebook.min_distance()
    bound = (K - 1) * 2.0 ** (-config.n * delta_min)
    trials = config.trials
    unresolvable = False
    if bound * trials < 100:
        needed = math.ceil(100 / bound) if bound > 0 else math.inf
        if config.auto_escalate and needed <= simulation_config.max_trials:
            logger.info(
                "Escalating trial count to resolve the bound",
                extra_data={"from": trials, "to": needed, "bound": bound},
            )
            trials = int(needed)
        else:
            unresolvable = True

    errors = _count_errors(
        _decoder(config.spec, codebook, config.n), trials, config.seed, config.stream, config.threads
    )
    pe_hat = errors / trials
    stderr = math.sqrt(pe_hat * (1.0 - pe_hat) / trials)
    passed = pe_hat - confidence * stderr <= bound
    status = "fail" if not passed else ("unresolvable" if unresolvable else "pass")
    logger.debug(
        "Simulation finished",
        extra_data={"pe_hat": pe_hat, "bound": bound, "trials": trials, "status": status},
    )
    return SimResult(
        pe_hat=pe_hat,
        stderr=stderr,
        trials=trials,
        bound=bound,
        delta_min=delta_min,
        n=config.n,
        K=K,
        rho=config.spec.rho,
        seed=config.seed,
        passed=passed,
        status=status,
        errors=errors,
    )


@dataclass(frozen=True)
class AvgBhattCheck:
    mc_estimate: float
    closed_form: float
    z_score: float
    stderr: float
    trials: int

    def to_dict(self) -> dict[str, Any]:
        return {
            "mc_estimate": self.mc_estimate,
            "closed_form": self.closed_form,
            "z_score": self.z_score,
            "stderr": self.stderr,
            "trials": self.trials,
        }


def verify_avg_bhatt(
    D: ArrayLike, N: int, rho: float, trials: int = 100_000, seed: int = 0, threads: int | None = None
) -> AvgBhattCheck:
    """Monte Carlo average of ``2^{-rho ||H D||^2 / (4 ln 2)}`` over Rayleigh H."""
    if trials < 10_000:
        raise ValidationError("at least 10^4 trials are required", "trials", trials, ">= 10000")
    difference = np.atleast_2d(np.asarray(D, dtype=complex))
    closed = avg_bhatt_rayleigh(difference_eigenvalues(difference), N, rho).coefficient
    M = difference.shape[0]

    def chunk(item: tuple[int, int]) -> tuple[float, float]:
        rng = substream(seed, item[0])
        H = _complex_normal(rng, (item[1], N, M))
        energy = np.sum(np.abs(H @ difference) ** 2, axis=(1, 2))
        values = np.exp(-rho * energy / 4.0)
        return float(values.sum()), float(np.square(values).sum())

    parts = parallel_map(chunk, list(enumerate(chunk_sizes(trials, simulation_config.chunk_size))), threads)
    total = math.fsum(p[0] for p in parts)
    squares = math.fsum(p[1] for p in parts)
    mean = total / trials
    variance = max(squares / trials - mean * mean, 0.0)
    stderr = math.sqrt(variance / trials)
    gap = abs(mean - closed)
    if stderr > 0:
        z = gap / stderr
    else:
        z = 0.0 if gap <= 1e-15 else math.inf
    return AvgBhattCheck(mean, closed, z, stderr, trials)


@dataclass
class ExponentEstimate:
    """Least-squares error exponent per channel use."""

    slope: float
    stderr: float
    intercept: float
    delta_min: float
    floor: float
    points: list[dict[str, float]] = field(default_factory=list)
    dropped: list[int] = field(default_factory=list)

    @property
    def above_floor(self) -> bool:
        return self.slope >= self.floor

    def to_dict(self) -> dict[str, Any]:
        return {
            "slope": self.slope,
            "stderr": self.stderr,
            "intercept": self.intercept,
            "delta_min": self.delta_min,
            "floor": self.floor,
            "above_floor": self.above_floor,
            "points": self.points,
            "dropped": self.dropped,
        }


def exponent_estimate(
    spec: ChannelSpec,
    codebook: Codebook,
    n_grid: Sequence[int],
    trials: int = 100_000,
    seed: int = 0,
    threads: int | None = None,
) -> ExponentEstimate:
    """Fit ``-log2 pe_hat`` against ``n`` over the estimable part of ``n_grid``.

    Points with ``pe_hat`` outside ``[10 / trials, 0.3]`` are dropped; fewer
    than three remaining points is an error.
    """
    if len(n_grid) < 3:
        raise ValidationError("n_grid needs at least three values", "n_grid", list(n_grid))
    kept: list[dict[str, float]] = []
    dropped: list[int] = []
    for index, n in enumerate(n_grid):
        result = simulate_pe(
            SimConfig(
                spec, codebook, n=int(n), trials=trials, seed=seed, stream=index,
                threads=threads, auto_escalate=False,
            )
        )
        if 10.0 / trials <= result.pe_hat <= 0.3:
            kept.append({"n": float(n), "pe_hat": result.pe_hat, "stderr": result.stderr})
        else:
            dropped.append(int(n))
    if len(kept) < 3:
        raise NumericalError(
            "fewer than three estimable points on the n grid",
            "exponent_estimate",
            {"dropped": dropped},
        )

    x = np.array([p["n"] for p in kept])
    y = -np.log2([p["pe_hat"] for p in kept])
    fit = stats.linregress(x, y)
    K = len(codebook)
    delta_min = codebook.min_distance()
    floor = delta_min - math.log2(max(K - 1, 1)) / float(x.max())
    return ExponentEstimate(
        slope=max(0.0, float(fit.slope)),
        stderr=float(fit.stderr),
        intercept=float(fit.intercept),
        delta_min=delta_min,
        floor=floor,
        points=kept,
        dropped=dropped,
    )


def energy_only_agreement(
    spec: ChannelSpec, codebook: Codebook, n: int = 1, trials: int = 10_000, seed: int = 0
) -> float:
    """Fraction of trials where energy-statistic and full-likelihood decisions agree."""
    scale = effective_scale_spec(spec)
    rows = n * scale.N
    levels = codebook.points.astype(float)
    variances = np.exp(levels)
    rng = substream(seed)
    sent = rng.integers(len(levels), size=trials)
    received = np.sqrt(variances[sent])[:, None] * _complex_normal(rng, (trials, rows))
    full = np.sum(
        -np.log(math.pi * variances)[None, None, :]
        - (np.abs(received) ** 2)[:, :, None] / variances[None, None, :],
        axis=1,
    )
    energy = np.sum(np.abs(received) ** 2, axis=1)
    reduced = -rows * levels[None, :] - energy[:, None] / variances[None, :]
    return float(np.mean(np.argmax(full, axis=1) == np.argmax(reduced, axis=1)))
