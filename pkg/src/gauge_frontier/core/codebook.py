"""Codebooks: ordered input points with a pairwise distance."""

import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from enum import StrEnum
from typing import Any

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..config.channel import ChannelKind, ChannelSpec
from ..utils.exceptions import ValidationError
from .channels import PairDistance, effective_scale_spec, pair_distance


class PowerConstraint(StrEnum):
    """How input points are power limited."""

    LOG_VARIANCE = "log-variance"  # scale family: u in [0, ln(1 + rho)]
    FROBENIUS = "frobenius"  # ||X||_F^2 <= budget
    ORTHONORMAL = "orthonormal"  # X X^H = I_M


@dataclass
class Codebook:
    """Ordered list of input points with a lazily computed distance matrix."""

    points: NDArray[Any]
    distance: PairDistance = field(repr=False)
    constraint: PowerConstraint
    budget: float
    _matrix: NDArray[np.float64] | None = field(default=None, init=False, repr=False)

    def __post_init__(self) -> None:
        self.points = np.asarray(self.points)
        if self.points.shape[0] < 1:
            raise ValidationError("codebook must be nonempty", "points")

    def __len__(self) -> int:
        return int(self.points.shape[0])

    def distance_matrix(self) -> NDArray[np.float64]:
        if self._matrix is None:
            size = len(self)
            matrix = np.zeros((size, size))
            for i in range(size):
                for j in range(i + 1, size):
                    matrix[i, j] = matrix[j, i] = self.distance(
                        self.points[i], self.points[j]
                    )
            self._matrix = matrix
        return self._matrix

    def min_distance(self) -> float:
        """Minimum off-diagonal distance; ``inf`` for a single point."""
        if len(self) < 2:
            return math.inf
        if self.constraint is PowerConstraint.LOG_VARIANCE and self._matrix is None:
            # distance grows with |u - u'|, so the closest pair is adjacent
            levels = np.sort(self.points.astype(float))
            gap = int(np.argmin(np.diff(levels)))
            return float(self.distance(levels[gap], levels[gap + 1]))
        matrix = self.distance_matrix()
        return float(np.min(matrix[np.triu_indices(len(self), k=1)]))

    def subset(self, indices: Sequence[int]) -> "Codebook":
        chosen = Codebook(
            self.points[list(indices)], self.distance, self.constraint, self.budget
        )
        if self._matrix is not None:
            chosen._matrix = self._matrix[np.ix_(list(indices), list(indices))]
        return chosen

    def check_power(self, tolerance: float = 1e-12) -> None:
        """Raise if any point violates the declared constraint."""
        if self.constraint is PowerConstraint.LOG_VARIANCE:
            u = self.points.astype(float)
            if np.any(u < -tolerance) or np.any(u > self.budget * (1 + tolerance) + tolerance):
                raise ValidationError(
                    "log-variance level outside [0, L]", "points", None, "0 <= u <= L"
                )
            return
        for index, point in enumerate(self.points):
            matrix = np.atleast_2d(point)
            if self.constraint is PowerConstraint.FROBENIUS:
                energy = float(np.sum(np.abs(matrix) ** 2))
                if energy > self.budget * (1 + tolerance):
                    raise ValidationError(
                        f"point {index} exceeds the power budget",
                        "points",
                        energy,
                        f"||X||_F^2 <= {self.budget}",
                    )
            else:
                gram = matrix @ matrix.conj().T
                if not np.allclose(gram, np.eye(gram.shape[0]), atol=1e-10):
                    raise ValidationError(
                        f"point {index} does not have orthonormal rows", "points"
                    )

    def to_list(self) -> list[Any]:
        """Points in a JSON-friendly form (complex entries as [re, im])."""
        if np.iscomplexobj(self.points):
            stacked = np.stack([self.points.real, self.points.imag], axis=-1)
            return stacked.tolist()
        return self.points.tolist()


def constraint_for(spec: ChannelSpec) -> tuple[PowerConstraint, float]:
    match spec.kind:
        case ChannelKind.FAST_FADING | ChannelKind.MULTIPATH:
            return PowerConstraint.LOG_VARIANCE, math.log1p(effective_scale_spec(spec).rho)
        case ChannelKind.BLOCK_FADING:
            return PowerConstraint.ORTHONORMAL, float(spec.M)
        case _:
            return PowerConstraint.FROBENIUS, float(spec.T)


def codebook_for(spec: ChannelSpec, points: ArrayLike) -> Codebook:
    """Codebook of ``points`` measured with the distance of ``spec``."""
    constraint, budget = constraint_for(spec)
    array = np.asarray(points)
    if constraint is not PowerConstraint.LOG_VARIANCE:
        array = array.astype(complex)
    return Codebook(array, pair_distance(spec), constraint, budget)


def parse_points(document: Any) -> NDArray[Any]:
    """Decode points written by ``Codebook.to_list``.

    A trailing axis of length two is read as ``[re, im]`` pairs for matrix
    points; flat lists of numbers are scale-family levels.
    """
    array = np.asarray(document, dtype=float)
    if array.ndim >= 2 and array.shape[-1] == 2:
        return array[..., 0] + 1j * array[..., 1]
    return array
