"""Packing numbers and diversity frontiers.

Threshold queries ask how many inputs fit at pairwise distance at least
``delta``; count queries ask for the largest minimum distance ``K`` inputs
can reach. The scale family is solved exactly. Matrix classes get a
constructive lower bound with a certificate and a volume converse, and
small candidate sets can be searched exhaustively.
"""

import itertools
import math
from collections.abc import Callable
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import optimize, special
from scipy.spatial import cKDTree

from ..config.channel import ChannelKind, ChannelSpec
from ..config.settings import analysis_config
from ..utils.exceptions import (
    BudgetExhaustedError,
    InstanceTooLargeError,
    NoPairError,
    SandwichViolationError,
    UnsupportedSpecError,
    ValidationError,
)
from ..utils.logging import get_logger
from .channels import (
    block_angle_terms,
    block_pair_frontier,
    effective_scale_spec,
    fixed_h_pair_frontier,
    frac_log_pair_distance,
    numerical_rank,
)
from .codebook import Codebook, codebook_for
from .divergence import LN2, hellinger_from_bhatt, log2_cosh, log2_one_plus
from .streams import parallel_map, substream


logger = get_logger(__name__)

SANDWICH_TOLERANCE = 1e-10
RANDOM_SEARCH_LIMIT = 4096
MAX_FPS_CANDIDATES = 20000


class Divergence(StrEnum):
    BHATTACHARYYA = "bhattacharyya"
    HELLINGER = "hellinger"
    KL = "kl"


@dataclass
class PackingResult:
    """Lower and upper bound on a packing number or a diversity frontier.

    ``mode`` is ``threshold`` (values are packing counts) or ``count``
    (values are minimum distances in bits for ``k`` codewords). With
    ``log_scale`` set, threshold values are packing complexities
    ``log2 N_pack`` instead of counts.
    """

    mode: str
    rho: float | None
    value_lower: float
    value_upper: float
    method_lower: str
    method_upper: str
    delta: float | None = None
    k: int | None = None
    log_scale: bool = False
    certificate: Codebook | None = None
    diagnostics: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        slack = SANDWICH_TOLERANCE * max(1.0, abs(self.value_upper))
        if self.value_lower > self.value_upper + slack:
            raise SandwichViolationError(
                self.value_lower, self.value_upper, f"{self.method_lower}/{self.method_upper}"
            )

    @property
    def exact(self) -> bool:
        return self.value_lower == self.value_upper

    @property
    def k_pack_lower(self) -> float | None:
        if self.mode != "threshold":
            return None
        return self.value_lower if self.log_scale else math.log2(self.value_lower)

    @property
    def k_pack_upper(self) -> float | None:
        if self.mode != "threshold":
            return None
        if self.log_scale or math.isinf(self.value_upper):
            return self.value_upper
        return math.log2(self.value_upper)

    def to_dict(self) -> dict[str, Any]:
        document: dict[str, Any] = {
            "mode": self.mode,
            "delta": self.delta,
            "k": self.k,
            "rho": self.rho,
            "value_lower": self.value_lower,
            "value_upper": self.value_upper,
            "method_lower": self.method_lower,
            "method_upper": self.method_upper,
        }
        if self.mode == "threshold":
            document["k_pack_lower"] = self.k_pack_lower
            document["k_pack_upper"] = self.k_pack_upper
        document["certificate"] = (
            None if self.certificate is None else self.certificate.to_list()
        )
        document["diagnostics"] = self.diagnostics
        return document


def _require_positive(value: float, name: str) -> None:
    if isinstance(value, bool) or not isinstance(value, int | float | np.number):
        raise ValidationError(f"{name} must be a number", name, value, "real number")
    if not (math.isfinite(value) and value > 0):
        raise ValidationError(f"{name} must be positive", name, value, f"{name} > 0")


def _require_count(K: int) -> None:
    if isinstance(K, bool) or not isinstance(K, int | np.integer):
        raise ValidationError("K must be an integer", "K", K, "integer")
    if K < 2:
        raise NoPairError("a frontier needs at least two codewords", k=int(K))


# ---------------------------------------------------------------------------
# Scale family (fast fading, guarded multipath)
# ---------------------------------------------------------------------------


def _scale_separation(spacing: float, N: int, divergence: Divergence) -> float:
    if divergence is Divergence.KL:
        return N * (math.expm1(-spacing) + spacing) / LN2
    return N * log2_cosh(spacing / 2.0)


def scale_spacing(delta: float, N: int, divergence: Divergence = Divergence.BHATTACHARYYA) -> float:
    """Log-variance spacing at which neighbouring levels are ``delta`` apart.

    For the Hellinger divergence ``delta`` is the squared Hellinger
    threshold in (0, 1) and is converted to its Bhattacharyya equivalent.
    """
    if divergence is Divergence.KL:
        target = delta * LN2 / N
        return float(
            optimize.brentq(
                lambda x: math.expm1(-x) + x - target, 0.0, target + 2.0, xtol=1e-15, rtol=1e-15
            )
        )
    z = math.expm1(delta * LN2 / N)
    return 2.0 * math.log1p(z + math.sqrt(z * (z + 2.0)))


def _bhatt_threshold(delta: float, divergence: Divergence) -> float:
    if divergence is Divergence.HELLINGER:
        if not 0.0 < delta < 1.0:
            raise ValidationError(
                "squared Hellinger threshold must lie in (0, 1)", "delta", delta, "0 < delta < 1"
            )
        return -math.log2(1.0 - delta)
    return delta


def _scale_certificate(L: float, count: int, N: int, rho: float) -> Codebook | None:
    if count > analysis_config.max_certificate_size:
        return None
    levels = np.array([0.0]) if count < 2 else L * np.arange(count) / (count - 1)
    return codebook_for(ChannelSpec(kind=ChannelKind.FAST_FADING, N=N, rho=rho), levels)


def scale_pack_count(
    delta: float,
    rho: float,
    N: int,
    divergence: Divergence | str = Divergence.BHATTACHARYYA,
) -> PackingResult:
    """Exact packing number of the scale family at threshold ``delta``.

    Equally spaced levels on ``[0, ln(1 + rho)]`` are optimal in one
    dimension, so the construction and the pigeonhole converse agree.
    """
    kind = Divergence(divergence)
    _require_positive(delta, "delta")
    _require_positive(rho, "rho")
    threshold = _bhatt_threshold(delta, kind)
    metric = Divergence.KL if kind is Divergence.KL else Divergence.BHATTACHARYYA

    L = math.log1p(rho)
    spacing = scale_spacing(threshold, N, metric)
    count = 1 + int(math.floor(L / spacing))

    def fits(n: int) -> bool:
        return n < 2 or _scale_separation(L / (n - 1), N, metric) >= threshold * (1 - 1e-12)

    while fits(count + 1):
        count += 1
    while count > 1 and not fits(count):
        count -= 1

    logger.debug(
        "Scale packing count",
        extra_data={"delta": delta, "rho": rho, "N": N, "count": count, "divergence": kind.value},
    )
    return PackingResult(
        mode="threshold",
        rho=rho,
        delta=delta,
        value_lower=float(count),
        value_upper=float(count),
        method_lower="equal-spacing",
        method_upper="pigeonhole",
        certificate=_scale_certificate(L, count, N, rho),
        diagnostics={"spacing": spacing, "span": L, "divergence": kind.value},
    )


def scale_frontier(K: int, rho: float, N: int) -> PackingResult:
    """Exact frontier ``N log2 cosh(L / (2 (K - 1)))`` of the scale family."""
    _require_count(K)
    _require_positive(rho, "rho")
    L = math.log1p(rho)
    value = N * log2_cosh(L / (2.0 * (K - 1)))
    return PackingResult(
        mode="count",
        rho=rho,
        k=int(K),
        value_lower=value,
        value_upper=value,
        method_lower="equal-spacing",
        method_upper="pigeonhole",
        certificate=_scale_certificate(L, int(K), N, rho),
        diagnostics={"spacing": L / (K - 1), "span": L},
    )


def scale_kl_cover_count(radius: float, rho: float, N: int) -> int:
    """Intervals of KL radius ``radius`` (bits) needed to cover ``[0, L]``."""
    _require_positive(radius, "radius")
    _require_positive(rho, "rho")
    target = radius * LN2 / N
    right = optimize.brentq(
        lambda x: math.expm1(x) - x - target, 0.0, math.sqrt(2.0 * target), xtol=1e-15
    )
    left = optimize.brentq(
        lambda x: math.expm1(-x) + x - target, 0.0, target + 1.0, xtol=1e-15
    )
    return max(1, math.ceil(math.log1p(rho) / (right + left)))


@dataclass(frozen=True)
class CoveringConverse:
    n_pack: int
    n_cover: int
    kl_radius: float

    @property
    def holds(self) -> bool:
        return self.n_pack <= self.n_cover

    def to_dict(self) -> dict[str, Any]:
        return {
            "n_pack": self.n_pack,
            "n_cover": self.n_cover,
            "kl_radius": self.kl_radius,
            "holds": self.holds,
        }


def hellinger_covering_converse(delta: float, rho: float, N: int) -> CoveringConverse:
    """Compare a Bhattacharyya packing with the KL cover of radius eps0^2 / 4."""
    epsilon_squared = hellinger_from_bhatt(delta)
    radius = epsilon_squared / (4.0 * LN2)
    n_pack = int(scale_pack_count(delta, rho, N).value_lower)
    return CoveringConverse(n_pack, scale_kl_cover_count(radius, rho, N), radius)


# ---------------------------------------------------------------------------
# Search primitives
# ---------------------------------------------------------------------------


def farthest_point_selection(
    K: int, row: Callable[[int], NDArray[np.float64]], start: int
) -> list[int]:
    """Greedy max-min selection; the lowest index wins ties."""
    first = int(np.argmax(row(start)))
    chosen = [first]
    nearest = np.array(row(first), dtype=float)
    nearest[first] = -np.inf
    while len(chosen) < K:
        following = int(np.argmax(nearest))
        chosen.append(following)
        nearest = np.minimum(nearest, row(following))
        nearest[chosen] = -np.inf
    return chosen


def greedy_maxmin(candidates: Codebook, K: int, seed: int = 0) -> Codebook:
    """Farthest-point subset of ``candidates`` started from a seeded point."""
    size = len(candidates)
    if not 1 <= K <= size:
        raise ValidationError("K must lie in [1, |candidates|]", "K", K, f"1 <= K <= {size}")
    matrix = candidates.distance_matrix()
    start = int(substream(seed).integers(size))
    if K == 1:
        return candidates.subset([start])
    return candidates.subset(farthest_point_selection(K, lambda i: matrix[i], start))


def bruteforce_frontier(candidates: Codebook, K: int) -> PackingResult:
    """Exact max-min K-subset of a small candidate set."""
    size = len(candidates)
    limit = analysis_config.max_bruteforce_candidates
    if size > limit:
        raise InstanceTooLargeError(size, limit)
    _require_count(K)
    if K > size:
        raise ValidationError("K exceeds the candidate count", "K", K, f"K <= {size}")

    matrix = candidates.distance_matrix()
    best_value = -math.inf
    best: list[int] = []

    def search(chosen: list[int], current: float, start: int) -> None:
        nonlocal best_value, best
        if len(chosen) == K:
            if current > best_value:
                best_value, best = current, list(chosen)
            return
        for index in range(start, size - (K - len(chosen)) + 1):
            reach = min([current, *(matrix[index, c] for c in chosen)])
            if reach <= best_value:
                continue
            chosen.append(index)
            search(chosen, reach, index + 1)
            chosen.pop()

    search([], math.inf, 0)
    return PackingResult(
        mode="count",
        rho=None,
        k=int(K),
        value_lower=best_value,
        value_upper=best_value,
        method_lower="exhaustive",
        method_upper="exhaustive",
        certificate=candidates.subset(best),
        diagnostics={"candidates": size},
    )


# ---------------------------------------------------------------------------
# Matrix codebooks
# ---------------------------------------------------------------------------


def _ball_gaussian(
    rng: np.random.Generator, count: int, M: int, T: int, budget: float
) -> NDArray[np.complex128]:
    """CN(0, 1/M) entries, projected into the ball ``||X||_F^2 <= budget``."""
    shape = (count, M, T)
    points = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / math.sqrt(2 * M)
    energy = np.sum(np.abs(points) ** 2, axis=(1, 2))
    scale = np.minimum(1.0, np.sqrt(budget / np.maximum(energy, 1e-300)))
    return points * scale[:, None, None]


def _random_orthonormal(
    rng: np.random.Generator, count: int, M: int, T: int
) -> NDArray[np.complex128]:
    """Uniform M-dimensional subspaces of C^T as orthonormal-row codewords."""
    shape = (count, T, M)
    gaussian = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    Q, _ = np.linalg.qr(gaussian)
    return np.conj(np.swapaxes(Q, 1, 2))


def _coherent_values(
    A: NDArray[np.complex128], B: NDArray[np.complex128], N: int, rho: float
) -> NDArray[np.float64]:
    D = A - B
    gram = D @ np.conj(np.swapaxes(D, -1, -2))
    eigenvalues = np.clip(np.linalg.eigvalsh(gram), 0.0, None)
    return N * np.sum(np.log1p(rho * eigenvalues / 4.0), axis=-1) / LN2


def _block_values(
    A: NDArray[np.complex128], B: NDArray[np.complex128], N: int, rho: float
) -> NDArray[np.float64]:
    cosines = np.linalg.svd(A @ np.conj(np.swapaxes(B, -1, -2)), compute_uv=False)
    sin_squared = np.clip(1.0 - cosines**2, 0.0, 1.0)
    return N * np.sum(block_angle_terms(sin_squared, math.log2(rho)), axis=-1)


PairValues = Callable[[NDArray[np.complex128], NDArray[np.complex128]], NDArray[np.float64]]


def _min_pair_direct(points: NDArray[np.complex128], values: PairValues) -> tuple[float, int, int]:
    best, pair = math.inf, (0, 1)
    for i in range(len(points) - 1):
        row = values(points[i][None], points[i + 1 :])
        j = int(np.argmin(row))
        if row[j] < best:
            best, pair = float(row[j]), (i, i + 1 + j)
    return best, pair[0], pair[1]


def _min_pair_coherent(
    points: NDArray[np.complex128], N: int, rho: float
) -> tuple[float, int, int]:
    """Minimum pairwise distance using a KD-tree to prune far pairs.

    A pair at Frobenius distance ``r`` is at least ``N log2(1 + rho r^2 / 4)``
    apart, so only pairs inside the radius where that floor reaches the
    current best need exact evaluation.
    """
    if len(points) <= 64:
        return _min_pair_direct(points, lambda a, b: _coherent_values(a, b, N, rho))
    flat = points.reshape(len(points), -1)
    coordinates = np.concatenate([flat.real, flat.imag], axis=1)
    tree = cKDTree(coordinates)
    _, neighbours = tree.query(coordinates, k=2)
    first = _coherent_values(points, points[neighbours[:, 1]], N, rho)
    index = int(np.argmin(first))
    best = float(first[index])
    radius = math.sqrt(4.0 * math.expm1(best * LN2 / N) / rho) * (1 + 1e-9)
    pairs = tree.query_pairs(radius, output_type="ndarray")
    if len(pairs) == 0:
        return best, index, int(neighbours[index, 1])
    exact = _coherent_values(points[pairs[:, 0]], points[pairs[:, 1]], N, rho)
    position = int(np.argmin(exact))
    if exact[position] < best:
        return float(exact[position]), int(pairs[position, 0]), int(pairs[position, 1])
    return best, index, int(neighbours[index, 1])


@dataclass(frozen=True)
class _Trial:
    value: float
    points: NDArray[np.complex128]
    pair: tuple[int, int]


def _search_codebooks(
    sampler: Callable[[np.random.Generator, int], NDArray[np.complex128]],
    values: PairValues,
    minimum: Callable[[NDArray[np.complex128]], tuple[float, int, int]],
    K: int,
    trials: int,
    seed: int,
    candidate_factor: int,
    threads: int | None,
) -> tuple[_Trial, str]:
    factor = candidate_factor if K * candidate_factor <= MAX_FPS_CANDIDATES else 1

    def run(trial: int) -> _Trial:
        rng = substream(seed, trial)
        candidates = sampler(rng, K * factor)
        if factor > 1:
            start = int(rng.integers(len(candidates)))
            chosen = farthest_point_selection(
                K, lambda i: values(candidates[i][None], candidates), start
            )
            candidates = candidates[chosen]
        value, i, j = minimum(candidates)
        return _Trial(value, candidates, (i, j))

    results = parallel_map(run, range(trials), threads)
    best = max(range(trials), key=lambda t: (results[t].value, -t))
    return results[best], "farthest-point" if factor > 1 else "random"


def mimo_frontier_upper(
    M: int, N: int, rho: float, K: int | None = None, T: int | None = None, log2_k: float | None = None
) -> float:
    """Volume converse for the Rayleigh-averaged coherent frontier.

    Disjoint balls of radius ``d/2`` around ``K`` codewords fit in the power
    ball of radius ``sqrt(T)`` grown by ``d/2``, so
    ``d^2 <= 4T / (K^{1/(2MT)} - 1)^2`` (and never more than the diameter
    ``4T``). Concavity over the eigenvalues of the closest difference gives
    ``N m log2(1 + rho d^2 / (4m))`` with ``m = min(M, T)``.
    """
    T = M if T is None else T
    if log2_k is None:
        if K is None:
            raise ValidationError("K or log2_k is required", "K")
        _require_count(K)
        log2_k = math.log2(K)
    root = math.expm1(log2_k * LN2 / (2 * M * T))
    log2_d2 = math.log2(4.0 * T) - (2.0 * math.log2(root) if root > 1.0 else 0.0)
    m = min(M, T)
    return N * m * log2_one_plus(math.log2(rho) + log2_d2 - math.log2(4.0 * m))


def mimo_frontier_lower(
    M: int,
    N: int,
    T: int,
    rho: float,
    K: int,
    trials: int = 16,
    seed: int = 0,
    candidate_factor: int = 4,
    threads: int | None = None,
) -> PackingResult:
    """Best-of-trials random Gaussian codebook for the coherent channel."""
    if T < M:
        raise ValidationError("coherent search needs T >= M", "T", T, f"T >= {M}")
    _require_count(K)
    if trials < 1:
        raise ValidationError("trials must be positive", "trials", trials, "trials >= 1")
    _require_positive(rho, "rho")

    best, method = _search_codebooks(
        lambda rng, count: _ball_gaussian(rng, count, M, T, float(T)),
        lambda a, b: _coherent_values(a, b, N, rho),
        lambda points: _min_pair_coherent(points, N, rho),
        K,
        trials,
        seed,
        candidate_factor,
        threads,
    )
    i, j = best.pair
    difference = best.points[i] - best.points[j]
    eigenvalues = np.clip(np.linalg.eigvalsh(difference @ difference.conj().T), 0.0, None)
    spread = float(eigenvalues[0] / eigenvalues.sum()) if eigenvalues.sum() > 0 else 0.0

    spec = ChannelSpec(kind=ChannelKind.COHERENT_MIMO, M=M, N=N, T=T, rho=rho)
    upper = mimo_frontier_upper(M, N, rho, K, T)
    logger.debug(
        "Coherent frontier search",
        extra_data={"K": K, "trials": trials, "lower": best.value, "upper": upper},
    )
    return PackingResult(
        mode="count",
        rho=rho,
        k=int(K),
        value_lower=best.value,
        value_upper=upper,
        method_lower=f"gaussian-{method}",
        method_upper="minkowski-volume",
        certificate=codebook_for(spec, best.points),
        diagnostics={
            "trials": trials,
            "seed": seed,
            "closest_pair": [i, j],
            "closest_pair_min_eigenvalue_share": spread,
        },
    )


def _block_term(log2_sin_squared: float, log2_rho: float) -> float:
    gain = 2.0 * log2_rho - 2.0 - log2_one_plus(log2_rho)
    return float(log2_one_plus(gain + log2_sin_squared))


def grassmann_frontier_upper(M: int, N: int, T: int, rho: float, log2_k: float) -> float:
    """Packing converse for noncoherent block fading.

    For lines the Fubini-Study cap volume gives ``d_c^2 <= 4 K^{-1/(T-1)}``.
    For ``M > 1`` the projection embedding places the subspaces on a sphere
    of radius ``sqrt(M (T - M) / T)`` in a space of dimension ``T^2 - 1``,
    and concavity spreads the chordal distance evenly over the M angles.
    """
    log2_rho = math.log2(rho)
    if M == 1:
        log2_d2 = min(0.0, 2.0 - log2_k / (T - 1))
        return N * _block_term(log2_d2, log2_rho)
    dimension = T * T - 1
    radius = math.sqrt(M * (T - M) / T)
    root = math.expm1(log2_k * LN2 / dimension)
    log2_s2 = 2.0 * (math.log2(2.0 * radius) - math.log2(root)) if root > 0 else math.inf
    log2_d2 = min(log2_s2 - 1.0, math.log2(M))
    return N * M * _block_term(log2_d2 - math.log2(M), log2_rho)


def grassmann_frontier_bounds(
    M: int,
    N: int,
    T: int,
    rho: float,
    K: int,
    trials: int = 16,
    seed: int = 0,
    candidate_factor: int = 4,
    threads: int | None = None,
) -> PackingResult:
    """Sandwich on the block-fading frontier for ``T >= 2M``."""
    if T < 2 * M:
        raise UnsupportedSpecError(
            "block-fading frontier bounds need T >= 2M", "BlockFading", "grassmann_frontier_bounds"
        )
    _require_count(K)
    _require_positive(rho, "rho")
    spec = ChannelSpec(kind=ChannelKind.BLOCK_FADING, M=M, N=N, T=T, rho=rho)

    if K <= T // M:
        identity = np.eye(T, dtype=complex)
        points = np.stack([identity[k * M : (k + 1) * M] for k in range(K)])
        lower = block_pair_frontier(M, N, T, rho)
        method = "orthogonal-subspaces"
    else:
        best, search = _search_codebooks(
            lambda rng, count: _random_orthonormal(rng, count, M, T),
            lambda a, b: _block_values(a, b, N, rho),
            lambda pts: _min_pair_direct(pts, lambda a, b: _block_values(a, b, N, rho)),
            K,
            trials,
            seed,
            candidate_factor,
            threads,
        )
        points, lower, method = best.points, best.value, f"grassmann-{search}"

    log2_k = math.log2(K)
    load = log2_k / (M * (T - M) * math.log2(rho)) if rho > 1 else math.nan
    return PackingResult(
        mode="count",
        rho=rho,
        k=int(K),
        value_lower=lower,
        value_upper=grassmann_frontier_upper(M, N, T, rho, log2_k),
        method_lower=method,
        method_upper="subspace-volume",
        certificate=codebook_for(spec, points),
        diagnostics={
            "load": load,
            "coefficient_lower": N * (1.0 - load),
            "coefficient_upper": M * N * (1.0 - load),
        },
    )


# ---------------------------------------------------------------------------
# Threshold packing of matrix classes (lattice constructions, volume converses)
# ---------------------------------------------------------------------------


def _largest_log2_scale(count_log2: Callable[[float], float], target: float) -> float:
    """Largest ``log2 eps`` with ``count_log2(log2 eps) >= target``.

    ``count_log2`` must be nonincreasing; the returned point satisfies the
    inequality.
    """
    lo = hi = 0.0
    for _ in range(512):
        if count_log2(hi) < target:
            break
        hi += 8.0
    for _ in range(512):
        if count_log2(lo) >= target:
            break
        lo -= 8.0
    else:
        raise BudgetExhaustedError("no scale reaches the requested count")
    for _ in range(200):
        if hi - lo < 1e-12:
            break
        mid = 0.5 * (lo + hi)
        if count_log2(mid) >= target:
            lo = mid
        else:
            hi = mid
    return lo


def _lattice_counts(
    singular: NDArray[np.float64], T: int
) -> tuple[Callable[[float], float], Callable[[float], float]]:
    m = len(singular)
    log2_half_width = np.log2(2.0 * singular / math.sqrt(2 * m))
    log2_reach = np.log2(2.0 * singular * math.sqrt(T))

    def lower(log2_eps: float) -> float:
        levels = 1.0 + np.floor(np.exp2(log2_half_width - log2_eps))
        return float(2 * T * np.sum(np.log2(levels)))

    def upper(log2_eps: float) -> float:
        return float(2 * T * np.sum(log2_one_plus(log2_reach - log2_eps)))

    return lower, upper


def _lattice_certificate(
    H: NDArray[np.complex128], levels: NDArray[np.int64], T: int, m: int
) -> NDArray[np.complex128]:
    _, _, Vh = np.linalg.svd(H)
    basis = Vh.conj().T[:, :m]
    half = 1.0 / math.sqrt(2 * m)
    axes = [
        (i, t, unit, np.linspace(-half, half, int(levels[i])) if levels[i] > 1 else np.zeros(1))
        for i in range(m)
        for t in range(T)
        for unit in (1.0, 1j)
    ]
    points = []
    for combo in itertools.product(*(axis[3] for axis in axes)):
        coefficients = np.zeros((m, T), dtype=complex)
        for (i, t, unit, _), value in zip(axes, combo):
            coefficients[i, t] += unit * value
        points.append(basis @ coefficients)
    return np.stack(points)


def lattice_pack_count(H: ArrayLike, T: int, delta: float, rho: float) -> PackingResult:
    """Cubic-lattice packing of the known channel's image, with a volume converse.

    The result is in log scale: ``value_lower`` and ``value_upper`` bound
    ``log2 N_pack``.
    """
    _require_positive(delta, "delta")
    _require_positive(rho, "rho")
    channel = np.atleast_2d(np.asarray(H, dtype=complex))
    m = numerical_rank(channel)
    if m == 0:
        raise ValidationError("H must be nonzero", "H")
    singular = np.linalg.svd(channel, compute_uv=False)[:m]
    log2_eps = 0.5 * (math.log2(4.0 * LN2 * delta) - math.log2(rho))
    lower_count, upper_count = _lattice_counts(singular, T)
    levels = (1 + np.floor(np.exp2(np.log2(2.0 * singular / math.sqrt(2 * m)) - log2_eps))).astype(
        np.int64
    )
    lower = lower_count(log2_eps)
    certificate = None
    if lower <= math.log2(1024):
        certificate = codebook_for(
            ChannelSpec(
                kind=ChannelKind.FIXED_H, M=channel.shape[1], N=channel.shape[0], T=T, rho=rho, H=channel
            ),
            _lattice_certificate(channel, levels, T, m),
        )
    return PackingResult(
        mode="threshold",
        rho=rho,
        delta=delta,
        value_lower=lower,
        value_upper=upper_count(log2_eps),
        method_lower="cubic-lattice",
        method_upper="ellipsoid-volume",
        log_scale=True,
        certificate=certificate,
        diagnostics={"rank": m, "levels": levels.tolist()},
    )


def fixed_h_frontier_bounds(H: ArrayLike, T: int, rho: float, log2_k: float) -> PackingResult:
    """Known-channel frontier for ``2^log2_k`` codewords by inverting the lattice bounds."""
    if log2_k < 1:
        raise NoPairError("a frontier needs at least two codewords")
    channel = np.atleast_2d(np.asarray(H, dtype=complex))
    m = numerical_rank(channel)
    singular = np.linalg.svd(channel, compute_uv=False)[:m]
    lower_count, upper_count = _lattice_counts(singular, T)
    scale = math.log2(rho) - 2.0 - math.log2(LN2)
    lower = 2.0 ** (scale + 2.0 * _largest_log2_scale(lower_count, log2_k))
    upper = 2.0 ** (scale + 2.0 * _largest_log2_scale(upper_count, log2_k))
    return PackingResult(
        mode="count",
        rho=rho,
        k=None,
        value_lower=lower,
        value_upper=min(upper, fixed_h_pair_frontier(channel, T, rho)),
        method_lower="cubic-lattice",
        method_upper="ellipsoid-volume",
        diagnostics={"log2_k": log2_k, "rank": m},
    )


def coherent_pack_count(M: int, N: int, T: int, delta: float, rho: float) -> PackingResult:
    """Coherent packing complexity bounds (log scale) from a cubic lattice."""
    _require_positive(delta, "delta")
    _require_positive(rho, "rho")
    log2_eps = 0.5 * (2.0 + math.log2(math.expm1(delta * LN2 / N)) - math.log2(rho))
    levels = 1.0 + math.floor(2.0 ** (math.log2(2.0 / math.sqrt(2 * M)) - log2_eps))
    log2_eps_upper = 0.5 * (
        2.0 + math.log2(M) + math.log2(math.expm1(delta * LN2 / (N * M))) - math.log2(rho)
    )
    upper = 2 * M * T * log2_one_plus(math.log2(2.0 * math.sqrt(T)) - log2_eps_upper)
    return PackingResult(
        mode="threshold",
        rho=rho,
        delta=delta,
        value_lower=2 * M * T * math.log2(levels),
        value_upper=upper,
        method_lower="cubic-lattice",
        method_upper="minkowski-volume",
        log_scale=True,
        diagnostics={"levels": int(levels)},
    )


def coherent_frontier_lattice_lower(M: int, N: int, T: int, rho: float, log2_k: float) -> float:
    """Frontier lower bound from the cubic lattice holding at least ``2^log2_k`` points."""
    if log2_k <= 0:
        raise NoPairError("a frontier needs at least two codewords")
    levels = math.ceil(2.0 ** (log2_k / (2 * M * T)))
    levels = max(levels, 2)
    log2_eps = math.log2(2.0 / math.sqrt(2 * M)) - math.log2(levels - 1)
    return N * log2_one_plus(math.log2(rho) + 2.0 * log2_eps - 2.0)


def grassmann_line_pack_count(T: int, N: int, delta: float, rho: float) -> PackingResult:
    """Block-fading packing complexity for ``M = 1`` (log scale).

    The cap volume of chordal radius ``eps`` is ``eps^{2(T-1)}``, so a
    maximal packing holds at least ``eps^{-2(T-1)}`` lines and no packing
    holds more than ``(2 / eps)^{2(T-1)}``.
    """
    if T < 2:
        raise UnsupportedSpecError(
            "line packing needs T >= 2", "BlockFading", "grassmann_line_pack_count"
        )
    _require_positive(delta, "delta")
    _require_positive(rho, "rho")
    log2_rho = math.log2(rho)
    log2_eps2 = (
        2.0 + log2_one_plus(log2_rho) + math.log2(math.expm1(delta * LN2 / N)) - 2.0 * log2_rho
    )
    if log2_eps2 > 0:
        lower = upper = 0.0
    else:
        lower = -(T - 1) * log2_eps2
        upper = (T - 1) * (2.0 - log2_eps2)
    return PackingResult(
        mode="threshold",
        rho=rho,
        delta=delta,
        value_lower=lower,
        value_upper=upper,
        method_lower="gilbert-varshamov",
        method_upper="cap-volume",
        log_scale=True,
        diagnostics={"log2_chordal_squared": log2_eps2},
    )


def grassmann_line_frontier_lower(N: int, T: int, rho: float, log2_k: float) -> float:
    """Gilbert-Varshamov frontier lower bound for ``2^log2_k`` lines."""
    return N * _block_term(-log2_k / (T - 1), math.log2(rho))


# ---------------------------------------------------------------------------
# Random coding with expurgation
# ---------------------------------------------------------------------------


def _input_sampler(spec: ChannelSpec) -> Callable[[np.random.Generator, int], NDArray[Any]]:
    match spec.kind:
        case ChannelKind.FAST_FADING | ChannelKind.MULTIPATH:
            span = math.log1p(effective_scale_spec(spec).rho)
            return lambda rng, count: rng.uniform(0.0, span, count)
        case ChannelKind.FIXED_H | ChannelKind.COHERENT_MIMO:
            return lambda rng, count: _ball_gaussian(rng, count, spec.M, spec.T, float(spec.T))
        case ChannelKind.BLOCK_FADING:
            if spec.T < spec.M:
                raise UnsupportedSpecError(
                    "block fading needs T >= M", spec.kind.value, "expurgated_pack_lower"
                )
            return lambda rng, count: _random_orthonormal(rng, count, spec.M, spec.T)
        case ChannelKind.FRAC_LOG:
            return lambda rng, count: _ball_gaussian(rng, count, 1, spec.T, float(spec.T))[:, 0, :]
    raise UnsupportedSpecError("unknown channel kind", str(spec.kind), "expurgated_pack_lower")


def expurgated_pack_lower(
    spec: ChannelSpec,
    delta: float,
    r0_estimate: float | None = None,
    sample_budget: int = 2**16,
    seed: int = 0,
) -> PackingResult:
    """Certified packing size from random codebooks with bad pairs removed.

    Each stage draws ``K`` inputs (``K`` doubling from 2), evaluates every
    pair and drops the later codeword of any pair closer than ``delta``. The
    survivors form a certified packing. The schedule ends when fewer than
    half survive, when the next stage would exceed ``sample_budget`` pair
    evaluations, or when ``log2 K`` passes ``r0_estimate - delta + 2``.
    """
    _require_positive(delta, "delta")
    sampler = _input_sampler(spec)
    used = 0
    stage = 0
    K = 2
    best_size = 0
    best_certificate: Codebook | None = None
    schedule: list[dict[str, Any]] = []
    exhausted = False

    while True:
        pairs = K * (K - 1) // 2
        if used + pairs > sample_budget:
            exhausted = True
            break
        codebook = codebook_for(spec, sampler(substream(seed, stage), K))
        matrix = codebook.distance_matrix()
        used += pairs
        alive = np.ones(K, dtype=bool)
        bad = 0
        for i, j in zip(*np.nonzero(np.triu(matrix < delta, k=1))):
            bad += 1
            if alive[i] and alive[j]:
                alive[j] = False
        survivors = int(alive.sum())
        schedule.append({"k": K, "bad_pairs": bad, "survivors": survivors})
        if survivors > best_size:
            best_size = survivors
            best_certificate = codebook.subset(np.flatnonzero(alive).tolist())
        stage += 1
        if survivors < K / 2:
            break
        if r0_estimate is not None and math.log2(2 * K) > r0_estimate - delta + 2:
            break
        K *= 2

    if best_certificate is None:
        raise BudgetExhaustedError("sample budget too small for a single stage", sample_budget)

    logger.debug(
        "Expurgated packing",
        extra_data={"kind": spec.kind.value, "rho": spec.rho, "size": best_size, "evaluations": used},
    )
    return PackingResult(
        mode="threshold",
        rho=spec.rho,
        delta=delta,
        value_lower=float(best_size),
        value_upper=math.inf,
        method_lower="expurgation",
        method_upper="none",
        certificate=best_certificate,
        diagnostics={
            "schedule": schedule,
            "evaluations": used,
            "budget_exhausted": exhausted,
        },
    )


# ---------------------------------------------------------------------------
# Cutoff rate and KL converse
# ---------------------------------------------------------------------------


def cutoff_rate(codebook: Codebook, weights: ArrayLike | None = None) -> float:
    """``-log2 sum P(x) P(x') 2^{-d(x, x')}`` in bits."""
    size = len(codebook)
    if weights is None:
        P = np.full(size, 1.0 / size)
    else:
        P = np.asarray(weights, dtype=float).ravel()
        if P.shape != (size,) or np.any(P < 0) or not math.isclose(P.sum(), 1.0, abs_tol=1e-9):
            raise ValidationError(
                "weights must be a probability vector over the codebook",
                "weights",
                P.tolist(),
                "nonnegative, sums to 1",
            )
    if size == 1:
        return 0.0
    coefficients = np.exp2(-codebook.distance_matrix())
    return max(0.0, -math.log2(float(P @ coefficients @ P)))


def kl_converse_bound(n_kl_cover: int, delta: float, eta: float) -> float:
    """Largest ``log2 K`` compatible with error ``eta`` under a KL cover."""
    if not 0.0 < eta < 0.5:
        raise ValidationError("eta must lie in (0, 1/2)", "eta", eta, "0 < eta < 0.5")
    if n_kl_cover < 1:
        raise ValidationError("cover size must be positive", "n_kl_cover", n_kl_cover, ">= 1")
    if delta < 0:
        raise ValidationError("delta must be nonnegative", "delta", delta, ">= 0")
    binary_entropy = float(special.entr(eta) + special.entr(1.0 - eta)) / LN2
    return (math.log2(n_kl_cover) + delta + 2.0 * binary_entropy) / (1.0 - eta)


# ---------------------------------------------------------------------------
# Dispatch by channel spec
# ---------------------------------------------------------------------------


def frontier_bounds(
    spec: ChannelSpec,
    K: int | None = None,
    log2_k: float | None = None,
    trials: int = 16,
    seed: int = 0,
    threads: int | None = None,
) -> PackingResult:
    """Frontier sandwich for ``K`` (or ``2^log2_k``) codewords of ``spec``."""
    if K is None and log2_k is None:
        raise ValidationError("K or log2_k is required", "K")
    if log2_k is None:
        _require_count(K)  # type: ignore[arg-type]
        log2_k = math.log2(K)  # type: ignore[arg-type]
    if log2_k < 1:
        raise NoPairError("a frontier needs at least two codewords")
    small = K if K is not None else (math.ceil(2.0**log2_k) if log2_k <= 12 else None)

    match spec.kind:
        case ChannelKind.FAST_FADING | ChannelKind.MULTIPATH:
            scale = effective_scale_spec(spec)
            count = small if small is not None else math.ceil(2.0**log2_k)
            return scale_frontier(int(count), scale.rho, scale.N)
        case ChannelKind.FIXED_H:
            assert spec.H is not None
            if small == 2:
                value = fixed_h_pair_frontier(spec.H, spec.T, spec.rho)
                return PackingResult(
                    mode="count",
                    rho=spec.rho,
                    k=2,
                    value_lower=value,
                    value_upper=value,
                    method_lower="antipodal",
                    method_upper="diameter",
                    certificate=default_codebook(spec, 2, seed),
                )
            return fixed_h_frontier_bounds(spec.H, spec.T, spec.rho, log2_k)
        case ChannelKind.COHERENT_MIMO:
            if small is not None and small <= RANDOM_SEARCH_LIMIT:
                return mimo_frontier_lower(
                    spec.M, spec.N, spec.T, spec.rho, int(small), trials, seed, threads=threads
                )
            return PackingResult(
                mode="count",
                rho=spec.rho,
                value_lower=coherent_frontier_lattice_lower(spec.M, spec.N, spec.T, spec.rho, log2_k),
                value_upper=mimo_frontier_upper(spec.M, spec.N, spec.rho, T=spec.T, log2_k=log2_k),
                method_lower="cubic-lattice",
                method_upper="minkowski-volume",
                diagnostics={"log2_k": log2_k},
            )
        case ChannelKind.BLOCK_FADING:
            if small is not None and small <= RANDOM_SEARCH_LIMIT:
                return grassmann_frontier_bounds(
                    spec.M, spec.N, spec.T, spec.rho, int(small), trials, seed, threads=threads
                )
            if spec.M == 1 and spec.T >= 2:
                return PackingResult(
                    mode="count",
                    rho=spec.rho,
                    value_lower=grassmann_line_frontier_lower(spec.N, spec.T, spec.rho, log2_k),
                    value_upper=grassmann_frontier_upper(1, spec.N, spec.T, spec.rho, log2_k),
                    method_lower="gilbert-varshamov",
                    method_upper="cap-volume",
                    diagnostics={"log2_k": log2_k},
                )
            raise BudgetExhaustedError(
                f"no constructive bound for 2^{log2_k:.1f} subspaces with M > 1"
            )
        case ChannelKind.FRAC_LOG:
            if small != 2:
                raise UnsupportedSpecError(
                    "fractional-log frontier is only available for K = 2",
                    spec.kind.value,
                    "frontier",
                )
            assert spec.beta is not None and spec.c_beta is not None
            value = frac_log_pair_distance(
                1.0, spec.beta, spec.c_beta, spec.rho, spec.N, max(spec.T, 8)
            )
            return PackingResult(
                mode="count",
                rho=spec.rho,
                k=2,
                value_lower=value,
                value_upper=math.inf,
                method_lower="on-off",
                method_upper="none",
            )
    raise UnsupportedSpecError("unknown channel kind", str(spec.kind), "frontier")


def pack_count(
    spec: ChannelSpec,
    delta: float,
    divergence: Divergence | str = Divergence.BHATTACHARYYA,
    sample_budget: int = 2**16,
    seed: int = 0,
) -> PackingResult:
    """Packing sandwich at threshold ``delta`` for ``spec`` at its own SNR.

    Only the scale family accepts the Hellinger and KL divergences. Block
    fading with ``M > 1`` and fractional-log channels fall back to the
    expurgated random-coding lower bound.
    """
    divergence = Divergence(divergence)
    if divergence is not Divergence.BHATTACHARYYA and not spec.is_scale_family:
        raise UnsupportedSpecError(
            f"{divergence.value} packing is only available for the scale family",
            spec.kind.value,
            "pack",
        )
    match spec.kind:
        case ChannelKind.FAST_FADING | ChannelKind.MULTIPATH:
            scale = effective_scale_spec(spec)
            return scale_pack_count(delta, scale.rho, scale.N, divergence)
        case ChannelKind.FIXED_H:
            assert spec.H is not None
            return lattice_pack_count(spec.H, spec.T, delta, spec.rho)
        case ChannelKind.COHERENT_MIMO:
            return coherent_pack_count(spec.M, spec.N, spec.T, delta, spec.rho)
        case ChannelKind.BLOCK_FADING if spec.M == 1:
            return grassmann_line_pack_count(spec.T, spec.N, delta, spec.rho)
        case ChannelKind.BLOCK_FADING | ChannelKind.FRAC_LOG:
            return expurgated_pack_lower(spec, delta, sample_budget=sample_budget, seed=seed)
    raise UnsupportedSpecError("unknown channel kind", str(spec.kind), "pack")


def default_codebook(spec: ChannelSpec, K: int, seed: int = 0, trials: int = 16) -> Codebook:
    """A good ``K``-point codebook for simulation and cutoff-rate evaluation."""
    if K < 1:
        raise ValidationError("K must be positive", "K", K, "K >= 1")
    match spec.kind:
        case ChannelKind.FAST_FADING | ChannelKind.MULTIPATH:
            span = math.log1p(effective_scale_spec(spec).rho)
            levels = np.array([0.0]) if K == 1 else span * np.arange(K) / (K - 1)
            return codebook_for(spec, levels)
        case ChannelKind.FIXED_H:
            assert spec.H is not None
            _, _, Vh = np.linalg.svd(spec.H)
            direction = Vh[0].conj()
            amplitudes = np.zeros(1) if K == 1 else np.linspace(-1.0, 1.0, K)
            points = amplitudes[:, None, None] * direction[None, :, None] * np.ones((1, 1, spec.T))
            return codebook_for(spec, points)
        case ChannelKind.COHERENT_MIMO:
            if K == 1:
                return codebook_for(spec, np.zeros((1, spec.M, spec.T)))
            result = mimo_frontier_lower(spec.M, spec.N, spec.T, spec.rho, K, trials, seed)
            assert result.certificate is not None
            return result.certificate
        case ChannelKind.BLOCK_FADING:
            if K <= max(spec.T // spec.M, 1) and spec.T >= spec.M:
                identity = np.eye(spec.T, dtype=complex)
                return codebook_for(
                    spec, np.stack([identity[k * spec.M : (k + 1) * spec.M] for k in range(K)])
                )
            result = grassmann_frontier_bounds(spec.M, spec.N, spec.T, spec.rho, K, trials, seed)
            assert result.certificate is not None
            return result.certificate
    raise UnsupportedSpecError(
        "no default codebook for this channel kind", spec.kind.value, "default_codebook"
    )
