"""Shared types and conventions: objective vectors, dominance, seeded streams.

Every objective is minimized. Objective vectors are plain float tuples (or
rows of a 2-d numpy array when a batch is handled at once).
"""
from __future__ import annotations

import math
import zlib
from typing import Sequence, Tuple, Union

import numpy as np

ObjectiveVector = Tuple[float, ...]
ConfigId = int
Fidelity = int

Key = Union[int, str]


class ContractError(ValueError):
    """Raised when an operation is called outside its preconditions."""


def as_objectives(points, *, allow_empty: bool = False) -> np.ndarray:
    """Coerce a batch of objective vectors into an ``(n, m)`` float array."""
    arr = np.asarray(points, dtype=float)
    if arr.ndim == 1 and arr.size == 0:
        arr = arr.reshape(0, 0)
    if arr.ndim != 2:
        raise ContractError(f"expected a list of objective vectors, got shape {arr.shape}")
    if arr.shape[0] == 0 and not allow_empty:
        raise ContractError("empty list of objective vectors")
    if arr.shape[0] and arr.shape[1] == 0:
        raise ContractError("objective vectors must have length >= 1")
    if not np.all(np.isfinite(arr)):
        raise ContractError("objective vectors must be finite")
    return arr


def dominates(a: Sequence[float], b: Sequence[float]) -> bool:
    """True iff ``a`` is no worse than ``b`` everywhere and strictly better somewhere."""
    if len(a) != len(b):
        raise ContractError(f"length mismatch: {len(a)} vs {len(b)}")
    strictly = False
    for x, y in zip(a, b):
        if x > y:
            return False
        if x < y:
            strictly = True
    return strictly


def dominance_matrix(points: np.ndarray) -> np.ndarray:
    """``D[i, j]`` is True when point i dominates point j."""
    le = np.all(points[:, None, :] <= points[None, :, :], axis=-1)
    lt = np.any(points[:, None, :] < points[None, :, :], axis=-1)
    return le & lt


def zscore_normalize(points) -> np.ndarray:
    """Center each coordinate to mean 0 and population variance 1.

    Coordinates with zero variance map to zeros.
    """
    arr = as_objectives(points)
    mean = arr.mean(axis=0)
    # constant columns can show a tiny non-zero std from rounding in the mean
    std = np.where(np.ptp(arr, axis=0) > 0, arr.std(axis=0), 0.0)
    centered = arr - mean
    safe = np.where(std > 0, std, 1.0)
    return np.where(std > 0, centered / safe, 0.0)


def _encode_key(part: Key) -> int:
    if isinstance(part, (bool, np.bool_)):
        raise TypeError("boolean stream keys are ambiguous")
    if isinstance(part, (int, np.integer)):
        if part < 0:
            raise ValueError("stream keys must be non-negative")
        return int(part)
    return zlib.crc32(str(part).encode("utf-8"))


class SeededRng:
    """Counter-based (Philox) random stream addressed by ``(seed, key...)``.

    ``child(*key)`` derives an independent sub-stream; the draws of a child
    depend only on the seed and the full key path, never on how many draws
    the parent has already made.
    """

    def __init__(self, seed: int, key: Tuple[Key, ...] = ()):
        if not isinstance(seed, (int, np.integer)) or seed < 0:
            raise ContractError(f"seed must be a non-negative integer, got {seed!r}")
        self.seed = int(seed)
        self.key = tuple(key)
        seq = np.random.SeedSequence(self.seed, spawn_key=tuple(_encode_key(k) for k in self.key))
        self.generator = np.random.Generator(np.random.Philox(seq))

    def child(self, *key: Key) -> "SeededRng":
        return SeededRng(self.seed, self.key + tuple(key))

    def __repr__(self) -> str:
        return f"SeededRng(seed={self.seed}, key={self.key!r})"

    # thin delegation for the draws the engine uses
    def random(self, size=None):
        return self.generator.random(size)

    def normal(self, loc=0.0, scale=1.0, size=None):
        return self.generator.normal(loc, scale, size)

    def dirichlet(self, alpha):
        return self.generator.dirichlet(alpha)

    def choice(self, n: int, size: int, replace: bool = False) -> np.ndarray:
        return self.generator.choice(n, size=size, replace=replace)

    def permutation(self, n: int) -> np.ndarray:
        return self.generator.permutation(n)


def round_half_away(x: float) -> int:
    """Round to the nearest integer, halves away from zero."""
    return int(math.copysign(math.floor(abs(x) + 0.5), x))
