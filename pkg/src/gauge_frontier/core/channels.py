"""Output laws, pairwise distances and rank quantities per channel class."""

import math
from collections.abc import Callable
from dataclasses import dataclass
from enum import StrEnum
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate, linalg

from ..config.channel import ChannelKind, ChannelSpec
from ..config.settings import analysis_config
from ..utils.exceptions import (
    NumericalError,
    QuadratureError,
    UnsupportedSpecError,
    ValidationError,
)
from ..utils.logging import get_logger
from .divergence import (
    LN2,
    ScaleLaw,
    avg_bhatt_rayleigh,
    bhatt_same_mean,
    difference_eigenvalues,
    log2_cosh,
    log2_one_plus,
)


logger = get_logger(__name__)

PairDistance = Callable[[Any, Any], float]


def numerical_rank(A: ArrayLike, rtol: float | None = None) -> int:
    """Number of singular values above ``rtol`` times the largest."""
    matrix = np.atleast_2d(np.asarray(A, dtype=complex))
    if matrix.size == 0:
        return 0
    singular = np.linalg.svd(matrix, compute_uv=False)
    if singular[0] == 0:
        return 0
    tolerance = analysis_config.rank_tolerance if rtol is None else rtol
    return int(np.sum(singular > tolerance * singular[0]))


def fixed_h_dof(H: ArrayLike, T: int) -> int:
    return T * numerical_rank(H)


def fixed_h_diversity(D: ArrayLike, N: int) -> int:
    return N * numerical_rank(D)


def fixed_h_bhatt(H: ArrayLike, D: ArrayLike, rho: float) -> float:
    """Known-channel distance ``rho * ||H D||_F^2 / (4 ln 2)``."""
    product = np.atleast_2d(np.asarray(H, dtype=complex)) @ np.atleast_2d(
        np.asarray(D, dtype=complex)
    )
    return float(rho * np.sum(np.abs(product) ** 2) / (4.0 * LN2))


@dataclass(frozen=True)
class BridgeTerms:
    """Additive decomposition of a pairwise distance over singular directions."""

    case: str
    terms: tuple[float, ...]

    @property
    def total(self) -> float:
        return math.fsum(self.terms)


def bridge_terms(
    D: ArrayLike, rho: float, N: int, H: ArrayLike | None = None
) -> BridgeTerms:
    """Split a pairwise distance into per-direction terms.

    With ``H`` (known channel) the terms are ``sigma_j^2 |H_l u_j|^2`` over
    the receive rows ``l`` and the nonzero singular directions ``u_j`` of
    ``D``; their sum times ``rho / (4 ln 2)`` is the known-channel distance.
    Without ``H`` (Rayleigh averaged) there is one term
    ``N log2(1 + rho sigma_j^2 / 4)`` per nonzero singular value.
    """
    matrix = np.atleast_2d(np.asarray(D, dtype=complex))
    if not np.any(matrix):
        raise ValidationError("D must be nonzero", "D")
    U, singular, _ = np.linalg.svd(matrix)
    rank = numerical_rank(matrix)
    power = singular[:rank] ** 2

    if H is None:
        terms = N * np.log1p(rho * power / 4.0) / LN2
        return BridgeTerms("rayleigh", tuple(float(t) for t in terms))

    channel = np.atleast_2d(np.asarray(H, dtype=complex))
    projections = np.abs(channel @ U[:, :rank]) ** 2
    terms = (projections * power[np.newaxis, :]).T.ravel()
    return BridgeTerms("known-channel", tuple(float(t) for t in terms))


def fast_fading_law(x: complex, rho: float, N: int) -> tuple[ScaleLaw, ...]:
    """Per-antenna output laws CN(0, rho |x|^2 + 1) of a peak-limited input."""
    if abs(x) > 1.0 + 1e-12:
        raise ValidationError("peak power violated", "x", x, "|x| <= 1")
    return tuple(ScaleLaw(rho * abs(x) ** 2 + 1.0) for _ in range(N))


def fast_fading_distance(x1: complex, x2: complex, rho: float, N: int) -> float:
    """Fast-fading distance; depends on the inputs only through their energy."""
    fast_fading_law(x1, rho, N)
    fast_fading_law(x2, rho, N)
    u1 = math.log1p(rho * abs(x1) ** 2)
    u2 = math.log1p(rho * abs(x2) ** 2)
    return N * log2_cosh((u1 - u2) / 2.0)


def multipath_effective_spec(
    taps: ArrayLike, rho: float, N: int
) -> ChannelSpec:
    """Reduce a guarded multipath channel to fast fading with SNR rho * sum(taps)."""
    profile = np.asarray(taps, dtype=float).ravel()
    if profile.size == 0 or np.any(profile < 0) or not np.any(profile > 0):
        raise ValidationError(
            "multipath profile needs a positive tap", "taps", profile.tolist()
        )
    return ChannelSpec(
        kind=ChannelKind.FAST_FADING, N=N, rho=float(rho * math.fsum(profile))
    )


def effective_scale_spec(spec: ChannelSpec) -> ChannelSpec:
    if spec.kind is ChannelKind.MULTIPATH:
        return multipath_effective_spec(spec.taps or (), spec.rho, spec.N)
    if spec.kind is not ChannelKind.FAST_FADING:
        raise UnsupportedSpecError(
            "scale-family operation needs a fast-fading spec", spec.kind.value
        )
    return spec


@dataclass(frozen=True)
class PrincipalAngles:
    """Principal angles between two row spaces, ascending in [0, pi/2]."""

    theta: tuple[float, ...]

    def __post_init__(self) -> None:
        for angle in self.theta:
            if not 0.0 <= angle <= math.pi / 2 + 1e-12:
                raise ValidationError(
                    "principal angle outside [0, pi/2]", "theta", angle
                )

    @property
    def chordal(self) -> float:
        return math.fsum(math.sin(t) ** 2 for t in self.theta)


def principal_angles(X1: ArrayLike, X2: ArrayLike) -> PrincipalAngles:
    """Principal angles between the row spaces of two M x T codewords."""
    first = np.atleast_2d(np.asarray(X1, dtype=complex))
    second = np.atleast_2d(np.asarray(X2, dtype=complex))
    if first.shape != second.shape:
        raise ValidationError("codewords must share a shape", "X2", second.shape)
    M, T = first.shape
    if M > T or numerical_rank(first) < M or numerical_rank(second) < M:
        raise ValidationError(
            "codewords must have full row rank M <= T", "X", (M, T), "full row rank"
        )
    theta = linalg.subspace_angles(first.conj().T, second.conj().T)
    theta = np.clip(np.sort(theta), 0.0, math.pi / 2)
    return PrincipalAngles(tuple(float(t) for t in theta))


def block_angle_terms(sin_squared: NDArray[np.float64], log2_rho: float) -> Any:
    log2_gain = 2.0 * log2_rho - 2.0 - log2_one_plus(log2_rho)
    with np.errstate(divide="ignore"):
        return log2_one_plus(log2_gain + np.log2(np.clip(sin_squared, 0.0, 1.0)))


def block_fading_bhatt(theta: PrincipalAngles | ArrayLike, rho: float, N: int) -> float:
    """Noncoherent block-fading distance from principal angles.

    Each angle contributes ``log2(1 + rho^2 sin^2(theta) / (4 (1 + rho)))``,
    the simplified form of the ratio of determinants for orthonormal-row
    codewords.
    """
    angles = theta if isinstance(theta, PrincipalAngles) else PrincipalAngles(
        tuple(float(t) for t in np.atleast_1d(np.asarray(theta, dtype=float)))
    )
    sin_squared = np.sin(np.asarray(angles.theta, dtype=float)) ** 2
    return float(N * np.sum(block_angle_terms(sin_squared, math.log2(rho))))


def block_fading_distance(
    X1: ArrayLike, X2: ArrayLike, rho: float, N: int
) -> float:
    """Exact noncoherent distance for arbitrary codewords via covariances."""
    first = np.atleast_2d(np.asarray(X1, dtype=complex))
    second = np.atleast_2d(np.asarray(X2, dtype=complex))
    identity = np.eye(first.shape[1])
    cov1 = rho * first.conj().T @ first + identity
    cov2 = rho * second.conj().T @ second + identity
    return N * bhatt_same_mean(cov1, cov2)


class BlockRegime(StrEnum):
    ENERGY_ONLY = "energy-only"
    PARTIAL = "partial"
    FULL = "full"


def block_fading_regime(M: int, T: int) -> BlockRegime:
    if T <= M:
        return BlockRegime.ENERGY_ONLY
    if T < 2 * M:
        return BlockRegime.PARTIAL
    return BlockRegime.FULL


def _psd_exponent(beta: float) -> float:
    if not 0.0 < beta < 1.0:
        raise ValidationError("beta must lie in (0, 1)", "beta", beta, "0 < beta < 1")
    return 2.0 / beta - 2.0


def szego_integral(
    beta: float, c_beta: float, P: float, rho: float, tolerance: float | None = None
) -> float:
    """Szego limit ``(1/2pi) int log2(1 + rho P c |lambda|^gamma) dlambda``.

    The substitution ``lambda = pi e^{-s}`` maps the cusp at the origin to an
    exponentially decaying tail, so the integral becomes
    ``int_0^inf log2(1 + a pi^gamma e^{-gamma s}) e^{-s} ds``.
    """
    gamma = _psd_exponent(beta)
    if not c_beta > 0 or not P > 0 or not rho > 0:
        raise ValidationError("c_beta, P and rho must be positive", "rho", rho)
    log_a = math.log(rho) + math.log(P) + math.log(c_beta) + gamma * math.log(math.pi)
    tol = tolerance or analysis_config.szego_tolerance

    def integrand(s: float) -> float:
        return float(np.logaddexp(0.0, log_a - gamma * s)) * math.exp(-s) / LN2

    knee = log_a / gamma
    pieces = [(0.0, knee), (knee, math.inf)] if knee > 0 else [(0.0, math.inf)]
    total = 0.0
    for lower, upper in pieces:
        value, abserr, _, *message = integrate.quad(
            integrand, lower, upper, epsabs=0.0, epsrel=1e-10, limit=400, full_output=1
        )
        if message and abserr > tol * max(abs(value), 1e-300):
            raise QuadratureError(f"Szego quadrature failed: {message[0]}", abserr, tol)
        total += value
    return total


def toeplitz_autocovariance(
    beta: float, c_beta: float, T: int, grid_points: int | None = None
) -> NDArray[np.float64]:
    """First ``T`` autocovariance lags of the PSD ``c |lambda|^gamma`` by FFT."""
    gamma = _psd_exponent(beta)
    n = grid_points or analysis_config.toeplitz_grid_points
    if T > n:
        raise ValidationError("T exceeds the FFT grid", "T", T, f"T <= {n}")
    lam = 2.0 * math.pi * np.arange(n) / n
    folded = np.minimum(lam, 2.0 * math.pi - lam)
    spectrum = c_beta * folded**gamma
    return np.real(np.fft.ifft(spectrum))[:T]


def toeplitz_eigenvalues(beta: float, c_beta: float, T: int) -> NDArray[np.float64]:
    """Eigenvalues of the T x T Toeplitz covariance, floored at the PSD tolerance."""
    lags = toeplitz_autocovariance(beta, c_beta, T)
    eigenvalues = np.linalg.eigvalsh(linalg.toeplitz(lags))
    top = max(float(eigenvalues[-1]), 0.0)
    floor = analysis_config.eigenvalue_floor
    if top <= 0 or float(eigenvalues[0]) < -1e-6 * top:
        raise NumericalError(
            "numerical autocovariance is not positive semidefinite",
            "toeplitz",
            {"min_eigenvalue": float(eigenvalues[0]), "max_eigenvalue": top},
        )
    return np.maximum(eigenvalues, floor)


def frac_log_pair_distance(
    P: float, beta: float, c_beta: float, rho: float, N: int, T: int
) -> float:
    """Per-symbol distance of the on-off pair over a length-T block."""
    if T < 8:
        raise ValidationError("block length must be at least 8", "T", T, "T >= 8")
    if not P > 0 or not rho > 0:
        raise ValidationError("P and rho must be positive", "P", P)
    mu = toeplitz_eigenvalues(beta, c_beta, T)
    log2_snr = math.log2(rho) + math.log2(P) + np.log2(mu)
    per_eigen = log2_one_plus(log2_snr - 1.0) - 0.5 * log2_one_plus(log2_snr)
    return float(N * math.fsum(per_eigen) / T)


def frac_log_input_distance(
    x1: ArrayLike, x2: ArrayLike, spec: ChannelSpec, lags: NDArray[np.float64]
) -> float:
    """Per-symbol distance between two length-T inputs of a FracLog channel."""
    R = linalg.toeplitz(lags)
    first = np.asarray(x1, dtype=complex)
    second = np.asarray(x2, dtype=complex)
    identity = np.eye(first.shape[0])
    cov1 = spec.rho * (first[:, None] * R * first.conj()[None, :]) + identity
    cov2 = spec.rho * (second[:, None] * R * second.conj()[None, :]) + identity
    return spec.N * bhatt_same_mean(cov1, cov2) / first.shape[0]


def fixed_h_pair_frontier(H: ArrayLike, T: int, rho: float) -> float:
    """Antipodal pair along the top singular direction: ``rho T s_max^2 / ln 2``."""
    top = float(np.linalg.svd(np.atleast_2d(np.asarray(H, dtype=complex)), compute_uv=False)[0])
    return rho * T * top**2 / LN2


def coherent_pair_frontier(M: int, N: int, T: int, rho: float) -> float:
    m = min(M, T)
    return N * m * log2_one_plus(math.log2(rho) + math.log2(T / m))


def block_pair_frontier(M: int, N: int, T: int, rho: float) -> float:
    opened = min(M, max(T - M, 0))
    if opened == 0:
        return 0.0
    return N * opened * float(block_angle_terms(np.ones(1), math.log2(rho))[0])


def fast_pair_frontier(N: int, rho: float) -> float:
    return N * log2_cosh(math.log1p(rho) / 2.0)


def pair_frontier(spec: ChannelSpec) -> float:
    """Exact two-codeword frontier of ``spec`` at its SNR."""
    match spec.kind:
        case ChannelKind.FIXED_H:
            assert spec.H is not None
            return fixed_h_pair_frontier(spec.H, spec.T, spec.rho)
        case ChannelKind.COHERENT_MIMO:
            return coherent_pair_frontier(spec.M, spec.N, spec.T, spec.rho)
        case ChannelKind.BLOCK_FADING:
            return block_pair_frontier(spec.M, spec.N, spec.T, spec.rho)
        case ChannelKind.FAST_FADING | ChannelKind.MULTIPATH:
            scale = effective_scale_spec(spec)
            return fast_pair_frontier(scale.N, scale.rho)
        case ChannelKind.FRAC_LOG:
            assert spec.beta is not None and spec.c_beta is not None
            return frac_log_pair_distance(
                1.0, spec.beta, spec.c_beta, spec.rho, spec.N, max(spec.T, 8)
            )
    raise UnsupportedSpecError("unknown channel kind", str(spec.kind))


def pair_distance(spec: ChannelSpec) -> PairDistance:
    """Distance between two input points of ``spec``.

    Scale-family points are log-variance levels; FixedH, coherent and block
    points are M x T matrices; FracLog points are length-T vectors.
    """
    match spec.kind:
        case ChannelKind.FAST_FADING | ChannelKind.MULTIPATH:
            N = spec.N
            return lambda a, b: N * log2_cosh((float(a) - float(b)) / 2.0)
        case ChannelKind.FIXED_H:
            H, rho = spec.H, spec.rho
            return lambda a, b: fixed_h_bhatt(H, np.asarray(a) - np.asarray(b), rho)
        case ChannelKind.COHERENT_MIMO:
            N, rho = spec.N, spec.rho
            return lambda a, b: avg_bhatt_rayleigh(
                difference_eigenvalues(np.asarray(a) - np.asarray(b)), N, rho
            ).distance
        case ChannelKind.BLOCK_FADING:
            N, rho = spec.N, spec.rho
            return lambda a, b: block_fading_bhatt(principal_angles(a, b), rho, N)
        case ChannelKind.FRAC_LOG:
            assert spec.beta is not None and spec.c_beta is not None
            lags = toeplitz_autocovariance(spec.beta, spec.c_beta, spec.T)
            return lambda a, b: frac_log_input_distance(a, b, spec, lags)
    raise UnsupportedSpecError("unknown channel kind", str(spec.kind))
