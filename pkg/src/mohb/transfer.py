"""Transfer-learning sampler over a Gaussian surrogate of the Pareto front.

Observations of related tasks are mapped per task and objective through
``Phi^-1(F(y))`` (empirical CDF then standard-normal quantile), averaged over
tasks into a per-config Gaussian, and new configs are proposed by sampling
that Gaussian once for every config and keeping the best non-dominated ones.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Optional

import numpy as np
from scipy.stats import norm, rankdata

from .benchio import BenchmarkTable, TransferCorpus
from .core import ContractError, SeededRng
from .pareto import top_k_nd

DEFAULT_SIGMA_FLOOR = 1e-2  # standard deviation; variance floor 1e-4


@dataclass(frozen=True, eq=False)
class NormalizerModel:
    """Sorted reference values per (task, objective); ``sorted_values`` is ``(T, m, n)``."""

    sorted_values: np.ndarray

    @property
    def n(self) -> int:
        return self.sorted_values.shape[2]

    def cdf(self, task: int, objective: int, y) -> np.ndarray:
        """Average-rank empirical CDF with plotting position ``rank / (n + 1)``."""
        ref = self.sorted_values[task, objective]
        y = np.asarray(y, dtype=float)
        below = np.searchsorted(ref, y, side="left")
        upto = np.searchsorted(ref, y, side="right")
        # average rank among ref; a value absent from ref gets rank (#below + 0.5)
        rank = below + (upto - below + 1) / 2.0
        return rank / (self.n + 1)

    def psi(self, task: int, objective: int, y) -> np.ndarray:
        return norm.ppf(self.cdf(task, objective, y))


@dataclass(frozen=True, eq=False)
class SurrogateFront:
    mean: np.ndarray  # (n, m)
    var: np.ndarray  # (n, m)

    def __post_init__(self):
        if self.mean.shape != self.var.shape or self.mean.ndim != 2:
            raise ContractError("surrogate mean and variance must both be (n, m)")
        if np.any(self.var < 0) or not np.all(np.isfinite(self.mean)):
            raise ContractError("surrogate needs finite means and non-negative variances")

    @property
    def n_configs(self) -> int:
        return self.mean.shape[0]


def fit_normalizer(corpus: TransferCorpus) -> NormalizerModel:
    n = corpus.y.shape[0]
    if n < 2:
        raise ContractError("normalizer needs at least two configs per task")
    # (n, T, m) -> (T, m, n)
    return NormalizerModel(np.sort(np.transpose(corpus.y, (1, 2, 0)), axis=-1))


def normalize_corpus(corpus: TransferCorpus) -> np.ndarray:
    """``z[i, j, k]`` for every corpus observation, computed from ranks directly."""
    n = corpus.y.shape[0]
    ranks = rankdata(corpus.y, method="average", axis=0)
    return norm.ppf(ranks / (n + 1))


def fit_surrogate(corpus: TransferCorpus, normalizer: Optional[NormalizerModel] = None) -> SurrogateFront:
    normalizer = normalizer or fit_normalizer(corpus)
    if normalizer.sorted_values.shape != (len(corpus.tasks), len(corpus.objective_names), len(corpus.configs)):
        raise ContractError("normalizer was fitted on a different corpus")
    z = np.empty_like(corpus.y)
    for j in range(len(corpus.tasks)):
        for k in range(len(corpus.objective_names)):
            z[:, j, k] = normalizer.psi(j, k, corpus.y[:, j, k])
    return SurrogateFront(z.mean(axis=1), z.var(axis=1))


def sample_front(surrogate: SurrogateFront, rng: SeededRng, sigma_floor: float = DEFAULT_SIGMA_FLOOR) -> np.ndarray:
    """One Gaussian draw per (config, objective), variance floored at ``sigma_floor ** 2``."""
    if sigma_floor < 0:
        raise ContractError("sigma_floor must be non-negative")
    std = np.sqrt(np.maximum(surrogate.var, sigma_floor**2))
    return surrogate.mean + std * rng.normal(size=surrogate.mean.shape)


def propose_configs(
    surrogate: SurrogateFront, k: int, rng: SeededRng, sigma_floor: float = DEFAULT_SIGMA_FLOOR
) -> List[int]:
    if k > surrogate.n_configs:
        raise ContractError(f"cannot propose {k} configs out of {surrogate.n_configs}")
    return top_k_nd(sample_front(surrogate, rng, sigma_floor), k)


class TransferSampler:
    """Hyperband sampling hook backed by a fixed surrogate."""

    def __init__(self, surrogate: SurrogateFront, sigma_floor: float = DEFAULT_SIGMA_FLOOR):
        self.surrogate = surrogate
        self.sigma_floor = sigma_floor

    @classmethod
    def from_corpus(cls, corpus: TransferCorpus, bench: BenchmarkTable, sigma_floor: float = DEFAULT_SIGMA_FLOOR):
        check_corpus_matches(corpus, bench)
        return cls(fit_surrogate(corpus), sigma_floor)

    def __call__(self, n: int, rng: SeededRng) -> List[int]:
        return propose_configs(self.surrogate, min(n, self.surrogate.n_configs), rng, self.sigma_floor)


def check_corpus_matches(corpus: TransferCorpus, bench: BenchmarkTable) -> None:
    if corpus.configs != bench.configs:
        raise ContractError(
            f"corpus configs ({len(corpus.configs)}) do not match the grid of benchmark {bench.name!r} ({bench.n_configs})"
        )
    if corpus.objective_names != bench.objective_names:
        raise ContractError(
            f"corpus objectives {corpus.objective_names} differ from benchmark objectives {bench.objective_names}"
        )
