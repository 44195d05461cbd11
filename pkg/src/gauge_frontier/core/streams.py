"""Seeded random substreams and a bounded worker pool.

Every unit of random work (a Monte Carlo chunk, a packing trial) draws from
its own ``SeedSequence`` child keyed by ``(seed, *key)``. Results therefore
depend only on the seed and the key, never on which thread ran the work or
in what order.
"""

from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from typing import TypeVar

import numpy as np

from ..config.settings import runtime_config
from ..utils.exceptions import ValidationError


T = TypeVar("T")
R = TypeVar("R")

MAX_SEED = 2**64 - 1


def validate_seed(seed: int) -> int:
    if not isinstance(seed, int | np.integer) or isinstance(seed, bool):
        raise ValidationError("seed must be an integer", "seed", seed, "integer")
    if not 0 <= int(seed) <= MAX_SEED:
        raise ValidationError(
            "seed must be a 64-bit unsigned integer", "seed", seed, "0 <= seed < 2**64"
        )
    return int(seed)


def substream(seed: int, *key: int) -> np.random.Generator:
    """Independent generator for the work item identified by ``key``."""
    return np.random.default_rng(
        np.random.SeedSequence(validate_seed(seed), spawn_key=tuple(key))
    )


def chunk_sizes(total: int, chunk: int) -> list[int]:
    """Split ``total`` trials into fixed-size chunks (the last may be short)."""
    if chunk < 1:
        raise ValidationError("chunk size must be positive", "chunk", chunk)
    full, rest = divmod(total, chunk)
    return [chunk] * full + ([rest] if rest else [])


def parallel_map(
    func: Callable[[T], R], items: Iterable[T], threads: int | None = None
) -> list[R]:
    """Map ``func`` over ``items`` on a bounded pool, preserving input order."""
    work: Sequence[T] = list(items)
    workers = max(1, min(threads or runtime_config.threads, len(work) or 1))
    if workers == 1:
        return [func(item) for item in work]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, work))
