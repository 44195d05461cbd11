"""Divergences between circularly symmetric complex Gaussian laws.

All distances are reported in bits. Natural logarithms appear only inside
the closed forms; every public value is divided by ``ln 2`` before it is
returned.

The quadrature oracles integrate user-supplied scalar densities over the
complex plane and exist to cross-check the closed forms.
"""

import math
from collections.abc import Callable
from dataclasses import dataclass, field
from typing import Any, NamedTuple

import numpy as np
from numpy.typing import ArrayLike, NDArray
from scipy import integrate, linalg, optimize

from ..config.settings import analysis_config
from ..utils.exceptions import InvalidLawError, QuadratureError, ValidationError
from ..utils.logging import get_logger


logger = get_logger(__name__)

LN2 = math.log(2.0)

Density = Callable[[complex], float]


@dataclass(frozen=True)
class ScaleLaw:
    """Zero-mean scalar complex Gaussian law CN(0, v)."""

    v: float

    def __post_init__(self) -> None:
        _check_variance(self.v, "v")

    @property
    def u(self) -> float:
        """Log-variance coordinate."""
        return math.log(self.v)


@dataclass(frozen=True)
class OutputLaw:
    """Complex Gaussian law CN(mean, covariance)."""

    mean: NDArray[np.complex128] = field(compare=False)
    covariance: NDArray[np.complex128] = field(compare=False)

    def __post_init__(self) -> None:
        mean = np.atleast_1d(np.asarray(self.mean, dtype=complex))
        cov = validate_covariance(self.covariance, "covariance")
        if mean.ndim != 1 or mean.shape[0] != cov.shape[0]:
            raise ValidationError(
                "mean dimension must equal covariance order",
                "mean",
                mean.shape,
                f"length {cov.shape[0]}",
            )
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "covariance", cov)

    @property
    def dimension(self) -> int:
        return int(self.mean.shape[0])


class AveragedBhattacharyya(NamedTuple):
    """Rayleigh-averaged Bhattacharyya coefficient and its distance."""

    coefficient: float
    distance: float


class ChernoffInformation(NamedTuple):
    value: float
    s: float


@dataclass(frozen=True)
class ScalarGaussianDensity:
    """Density of CN(mean, var) on the complex plane, with its logarithm."""

    mean: complex = 0j
    var: float = 1.0

    def __post_init__(self) -> None:
        _check_variance(self.var, "var")

    @property
    def circular(self) -> bool:
        return self.mean == 0

    def __call__(self, y: complex) -> float:
        return math.exp(self.logpdf(y))

    def logpdf(self, y: complex) -> float:
        return -math.log(math.pi * self.var) - abs(y - self.mean) ** 2 / self.var


def _check_variance(v: Any, name: str) -> float:
    try:
        value = float(v)
    except (TypeError, ValueError) as e:
        raise InvalidLawError(f"{name} must be a real number", name) from e
    if not math.isfinite(value) or value <= 0:
        raise InvalidLawError(f"{name} must be a positive finite variance", name)
    return value


def validate_covariance(cov: ArrayLike, name: str = "covariance") -> NDArray[np.complex128]:
    """Return ``cov`` as a complex Hermitian positive-definite matrix.

    Raises:
        InvalidLawError: if the matrix is not square, not Hermitian within
            the relative tolerance, or has a minimum eigenvalue at or below
            ``pd_tolerance`` times the maximum.
    """
    matrix = np.atleast_2d(np.asarray(cov, dtype=complex))
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1]:
        raise InvalidLawError(f"{name} must be a square matrix", name)
    if not np.all(np.isfinite(matrix)):
        raise InvalidLawError(f"{name} has non-finite entries", name)

    scale = max(float(np.linalg.norm(matrix)), np.finfo(float).tiny)
    asymmetry = float(np.linalg.norm(matrix - matrix.conj().T))
    if asymmetry > analysis_config.hermitian_tolerance * scale:
        raise InvalidLawError(f"{name} is not Hermitian", name)

    eigenvalues = np.linalg.eigvalsh(matrix)
    top = float(eigenvalues[-1])
    if top <= 0 or float(eigenvalues[0]) <= analysis_config.pd_tolerance * top:
        raise InvalidLawError(
            f"{name} is not positive definite", name, float(eigenvalues[0])
        )
    return matrix


def _log_det(cov: NDArray[np.complex128]) -> float:
    factor, _ = linalg.cho_factor(cov, lower=True)
    return float(2.0 * np.sum(np.log(np.abs(np.diag(factor)))))


def log2_cosh(x: ArrayLike) -> Any:
    """Overflow-safe ``log2(cosh(x))``."""
    ax = np.abs(np.asarray(x, dtype=float))
    result = (ax + np.log1p(np.exp(-2.0 * ax)) - LN2) / LN2
    return float(result) if result.ndim == 0 else result


def log2_one_plus(log2_a: ArrayLike) -> Any:
    """``log2(1 + a)`` from ``log2(a)``; accepts ``-inf`` for ``a = 0``."""
    result = np.logaddexp2(0.0, np.asarray(log2_a, dtype=float))
    return float(result) if result.ndim == 0 else result


def bhatt_same_covariance(
    mean1: ArrayLike, mean2: ArrayLike, cov: ArrayLike
) -> float:
    """Bhattacharyya distance between CN(mean1, cov) and CN(mean2, cov)."""
    matrix = validate_covariance(cov, "cov")
    diff = np.atleast_1d(np.asarray(mean1, dtype=complex)) - np.atleast_1d(
        np.asarray(mean2, dtype=complex)
    )
    if diff.ndim != 1 or diff.shape[0] != matrix.shape[0]:
        raise ValidationError(
            "mean dimensions must match the covariance order",
            "mean",
            diff.shape,
            f"length {matrix.shape[0]}",
        )
    solution = linalg.cho_solve(linalg.cho_factor(matrix, lower=True), diff)
    quadratic = float(np.real(np.vdot(diff, solution)))
    return max(quadratic, 0.0) / (4.0 * LN2)


def bhatt_same_mean(cov1: ArrayLike, cov2: ArrayLike) -> float:
    """Bhattacharyya distance between CN(0, cov1) and CN(0, cov2)."""
    first = validate_covariance(cov1, "cov1")
    second = validate_covariance(cov2, "cov2")
    if first.shape != second.shape:
        raise ValidationError(
            "covariances must have the same order",
            "cov2",
            second.shape,
            f"shape {first.shape}",
        )
    value = _log_det((first + second) / 2.0) - (_log_det(first) + _log_det(second)) / 2.0
    return max(value, 0.0) / LN2


def bhatt_gaussian(law1: OutputLaw, law2: OutputLaw) -> float:
    """Bhattacharyya distance between two general complex Gaussian laws."""
    if law1.dimension != law2.dimension:
        raise ValidationError("laws must have the same dimension", "law2")
    average = (law1.covariance + law2.covariance) / 2.0
    return bhatt_same_covariance(law1.mean, law2.mean, average) + bhatt_same_mean(
        law1.covariance, law2.covariance
    )


def bhatt_log_scale(u1: float, u2: float) -> float:
    """Scale-family distance from log-variances (no overflow for huge gaps)."""
    return float(log2_cosh((u1 - u2) / 2.0))


def bhatt_scale(v1: float, v2: float) -> float:
    """Bhattacharyya distance between CN(0, v1) and CN(0, v2)."""
    first = _check_variance(v1, "v1")
    second = _check_variance(v2, "v2")
    return bhatt_log_scale(math.log(first), math.log(second))


def kl_scale(v1: float, v2: float) -> float:
    """KL(CN(0, v1) || CN(0, v2)) in bits."""
    first = _check_variance(v1, "v1")
    second = _check_variance(v2, "v2")
    t = math.log(first) - math.log(second)
    return max(math.expm1(t) - t, 0.0) / LN2


def hellinger_from_bhatt(d_b: float) -> float:
    """Squared Hellinger distance ``1 - 2**-d_b``."""
    if math.isnan(d_b) or d_b < 0:
        raise ValidationError(
            "Bhattacharyya distance must be nonnegative", "dB", d_b, "dB >= 0"
        )
    return -math.expm1(-d_b * LN2)


def chernoff_log_scale(u1: float, u2: float, s: float) -> float:
    """Chernoff distance of order ``s`` from log-variances."""
    if not 0.0 < s < 1.0:
        raise ValidationError("s must lie in (0, 1)", "s", s, "0 < s < 1")
    if s == 0.5:
        return bhatt_log_scale(u1, u2)
    mixture = float(np.logaddexp(math.log(s) + u2, math.log1p(-s) + u1))
    return max(mixture - (1.0 - s) * u1 - s * u2, 0.0) / LN2


def chernoff_scale(v1: float, v2: float, s: float) -> float:
    """Chernoff distance ``-log2 integral p^s q^(1-s)`` with p = CN(0, v1)."""
    first = _check_variance(v1, "v1")
    second = _check_variance(v2, "v2")
    return chernoff_log_scale(math.log(first), math.log(second), s)


def chernoff_information_scale(v1: float, v2: float) -> ChernoffInformation:
    """Maximum of ``chernoff_scale`` over s and the maximising order."""
    u1 = math.log(_check_variance(v1, "v1"))
    u2 = math.log(_check_variance(v2, "v2"))
    if u1 == u2:
        return ChernoffInformation(0.0, 0.5)
    eps = 1e-12
    result = optimize.minimize_scalar(
        lambda s: -chernoff_log_scale(u1, u2, float(s)),
        bounds=(eps, 1.0 - eps),
        method="bounded",
        options={"xatol": 1e-12},
    )
    s_best = float(result.x)
    return ChernoffInformation(chernoff_log_scale(u1, u2, s_best), s_best)


def avg_bhatt_rayleigh(
    eigs: ArrayLike, N: int, rho: float
) -> AveragedBhattacharyya:
    """Bhattacharyya coefficient averaged over i.i.d. Rayleigh fading.

    Args:
        eigs: eigenvalues of ``D D^H`` for the codeword difference ``D``
        N: receive antennas
        rho: SNR

    Returns:
        ``(E[B], d)`` with ``d = N * sum(log2(1 + rho * eig / 4))``
    """
    values = np.atleast_1d(np.asarray(eigs, dtype=float))
    if np.any(values < 0) or not np.all(np.isfinite(values)):
        raise ValidationError(
            "eigenvalues must be nonnegative and finite", "eigs", values, ">= 0"
        )
    if N < 1:
        raise ValidationError("N must be at least 1", "N", N, "N >= 1")
    if not rho > 0:
        raise ValidationError("rho must be positive", "rho", rho, "rho > 0")
    distance = float(N * np.sum(np.log1p(rho * values / 4.0)) / LN2)
    # Smallest positive double once 2^-d underflows; the distance stays exact
    return AveragedBhattacharyya(max(2.0**-distance, math.ulp(0.0)), distance)


def difference_eigenvalues(D: ArrayLike) -> NDArray[np.float64]:
    """Eigenvalues of ``D D^H`` clipped at zero."""
    matrix = np.atleast_2d(np.asarray(D, dtype=complex))
    return np.clip(np.linalg.eigvalsh(matrix @ matrix.conj().T), 0.0, None)


def _radial_integral(func: Callable[[float], float], tolerance: float) -> tuple[float, float]:
    value, abserr, info, *message = integrate.quad(
        lambda r: 2.0 * math.pi * r * func(r),
        0.0,
        math.inf,
        epsabs=tolerance / 10.0,
        epsrel=1e-12,
        limit=400,
        full_output=1,
    )
    if message:
        raise QuadratureError(f"radial quadrature failed: {message[0]}", abserr, tolerance)
    return float(value), float(abserr)


def _planar_integral(
    func: Callable[[float, float], float], tolerance: float
) -> tuple[float, float]:
    value, abserr = integrate.nquad(
        lambda x, y: func(x, y),
        [[-math.inf, math.inf], [-math.inf, math.inf]],
        opts={"epsabs": tolerance / 10.0, "epsrel": 1e-12, "limit": 200},
    )
    return float(value), float(abserr)


def _integrate(
    integrand: Callable[[complex], float], circular: bool, tolerance: float
) -> float:
    if circular:
        value, abserr = _radial_integral(lambda r: integrand(complex(r, 0.0)), tolerance)
    else:
        value, abserr = _planar_integral(
            lambda x, y: integrand(complex(x, y)), tolerance
        )
    if abserr > tolerance:
        raise QuadratureError("quadrature tolerance not reached", abserr, tolerance)
    return value


def _check_normalized(density: Density, circular: bool, name: str) -> None:
    mass = _integrate(density, circular, analysis_config.quadrature_tolerance)
    if abs(mass - 1.0) > 1e-6:
        raise ValidationError(
            f"{name} does not integrate to 1", name, mass, "|mass - 1| <= 1e-6"
        )


def _is_circular(*densities: Density) -> bool:
    return all(getattr(d, "circular", False) for d in densities)


def quadrature_bhatt_oracle(
    density1: Density,
    density2: Density,
    circular: bool | None = None,
    tolerance: float | None = None,
) -> float:
    """Bhattacharyya distance by adaptive quadrature of sqrt(p q) over C.

    Circularly symmetric pairs are integrated radially; any other pair uses a
    2-D integral over the real and imaginary parts. Densities without a
    ``circular`` attribute are treated as general unless ``circular`` is set.
    """
    radial = _is_circular(density1, density2) if circular is None else circular
    tol = tolerance or analysis_config.quadrature_tolerance
    _check_normalized(density1, radial, "density1")
    _check_normalized(density2, radial, "density2")

    coefficient = _integrate(
        lambda y: math.sqrt(density1(y) * density2(y)), radial, tol
    )
    logger.debug(
        "Quadrature Bhattacharyya coefficient",
        extra_data={"coefficient": coefficient, "radial": radial},
    )
    return max(-math.log2(coefficient), 0.0)


def quadrature_kl_oracle(
    density1: Density,
    density2: Density,
    circular: bool | None = None,
    tolerance: float | None = None,
) -> float:
    """KL(p || q) in bits by adaptive quadrature."""
    radial = _is_circular(density1, density2) if circular is None else circular
    tol = tolerance or analysis_config.quadrature_tolerance
    _check_normalized(density1, radial, "density1")
    _check_normalized(density2, radial, "density2")

    def log_density(density: Density, y: complex) -> float:
        logpdf = getattr(density, "logpdf", None)
        if logpdf is not None:
            return float(logpdf(y))
        value = density(y)
        return math.log(value) if value > 0 else -math.inf

    def integrand(y: complex) -> float:
        p = density1(y)
        if p == 0.0:
            return 0.0
        return p * (log_density(density1, y) - log_density(density2, y))

    return max(_integrate(integrand, radial, tol), 0.0) / LN2
