"""Random-weight scalarizations used as ranking baselines inside Hyperband."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .core import ContractError, SeededRng, as_objectives, zscore_normalize

DEFAULT_RHO = 0.05
LAMBDA_FLOOR = 1e-12

METHODS = ("linear", "parego", "hv")


@dataclass(frozen=True)
class ScalarizationWeights:
    lam: Tuple[float, ...]
    rho: float = DEFAULT_RHO

    def __post_init__(self):
        if any(x < 0 for x in self.lam):
            raise ContractError("scalarization weights must be non-negative")
        if self.rho < 0:
            raise ContractError("rho must be non-negative")


def draw_weights(rng: SeededRng, m: int, mode: str = "simplex", rho: float = DEFAULT_RHO) -> ScalarizationWeights:
    """Draw a weight vector uniformly on the simplex or the positive unit sphere."""
    if m < 1:
        raise ContractError(f"m must be >= 1, got {m}")
    if mode == "simplex":
        if m == 1:
            return ScalarizationWeights((1.0,), rho)
        lam = rng.dirichlet(np.ones(m))
    elif mode == "sphere":
        while True:
            g = np.abs(rng.normal(size=m))
            norm = float(np.sqrt((g**2).sum()))
            if norm > 0:
                break
        lam = g / norm
    else:
        raise ContractError(f"unknown weight mode {mode!r}")
    return ScalarizationWeights(tuple(float(x) for x in lam), rho)


def _check(y: Sequence[float], w: ScalarizationWeights) -> np.ndarray:
    y = np.asarray(y, dtype=float)
    if y.shape != (len(w.lam),):
        raise ContractError(f"length mismatch: objectives {y.shape} vs weights {len(w.lam)}")
    return y


def scalarize_linear(y, w: ScalarizationWeights) -> float:
    y = _check(y, w)
    return float(np.dot(w.lam, y))


def scalarize_parego(y, w: ScalarizationWeights) -> float:
    y = _check(y, w)
    weighted = np.asarray(w.lam) * y
    return float(weighted.max() + w.rho * weighted.sum())


def scalarize_hypervolume(y, w: ScalarizationWeights) -> float:
    """``min_i max(0, y_i / lam_i) ** m``; zero weights are floored at 1e-12."""
    y = _check(y, w)
    lam = np.maximum(np.asarray(w.lam), LAMBDA_FLOOR)
    m = y.shape[0]
    return float(np.min(np.maximum(0.0, y / lam) ** m))


_SCORERS = {
    "linear": scalarize_linear,
    "parego": scalarize_parego,
    "hv": scalarize_hypervolume,
}


def top_k_scalarized(
    points,
    k: int,
    method: str,
    rng: Optional[SeededRng] = None,
    *,
    rho: float = DEFAULT_RHO,
    weights: Optional[ScalarizationWeights] = None,
) -> List[int]:
    """Indices of the ``k`` lowest scalarized scores of a z-scored batch.

    One weight vector is drawn per call unless ``weights`` is given. For
    ``hv`` the batch is additionally shifted by its per-coordinate minimum so
    that every entry is non-negative. Ties break by lowest index.
    """
    if method not in _SCORERS:
        raise ContractError(f"unknown scalarization {method!r}; expected one of {METHODS}")
    arr = as_objectives(points, allow_empty=True)
    n = arr.shape[0]
    if k < 0 or k > n:
        raise ContractError(f"k={k} out of range for {n} points")
    if k == 0:
        return []
    z = zscore_normalize(arr)
    if method == "hv":
        z = z - z.min(axis=0)
    if weights is None:
        if rng is None:
            raise ContractError("either rng or weights is required")
        weights = draw_weights(rng, arr.shape[1], "sphere" if method == "hv" else "simplex", rho)
    scorer = _SCORERS[method]
    scores = np.array([scorer(row, weights) for row in z])
    return [int(i) for i in np.argsort(scores, kind="stable")[:k]]
