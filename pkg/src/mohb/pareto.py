"""Non-dominated sorting with greedy epsilon-net ordering inside each front."""
from __future__ import annotations

from dataclasses import dataclass
from typing import List, Set, Tuple

import numpy as np

from .core import ContractError, as_objectives, dominance_matrix, zscore_normalize


@dataclass(frozen=True)
class RankedIndices:
    """Result of :func:`nondominated_sort`.

    ``order`` is a permutation of the input indices; ``front_label[k]`` is the
    front (0 = first Pareto front) of the point ``order[k]``.
    """

    order: Tuple[int, ...]
    front_label: Tuple[int, ...]

    def labels_by_point(self) -> List[int]:
        labels = [0] * len(self.order)
        for idx, label in zip(self.order, self.front_label):
            labels[idx] = label
        return labels


def pareto_front(points) -> Set[int]:
    arr = as_objectives(points)
    dominated = dominance_matrix(arr).any(axis=0)
    return {int(i) for i in np.flatnonzero(~dominated)}


def epsilon_net_sort(points) -> List[int]:
    """Greedy farthest-point ordering.

    Starts at the minimizer of the first objective, then repeatedly appends
    the point whose Euclidean distance to the selected set is largest.
    Distances are measured after z-scoring the given points, so objectives
    with different units contribute comparably. Ties go to the lowest index.
    """
    arr = as_objectives(points)
    n = arr.shape[0]
    # raw values for the start: normalization is monotone but may merge near-ties
    first = int(np.argmin(arr[:, 0]))
    if n == 1:
        return [first]
    z = zscore_normalize(arr)
    order = [first]
    selected = np.zeros(n, dtype=bool)
    selected[first] = True
    min_dist = np.sqrt(((z - z[first]) ** 2).sum(axis=1))
    for _ in range(n - 1):
        candidates = np.where(selected, -np.inf, min_dist)
        nxt = int(np.argmax(candidates))
        order.append(nxt)
        selected[nxt] = True
        min_dist = np.minimum(min_dist, np.sqrt(((z - z[nxt]) ** 2).sum(axis=1)))
    return order


def nondominated_sort(points) -> RankedIndices:
    """Peel Pareto fronts; order each front by :func:`epsilon_net_sort`."""
    arr = as_objectives(points)
    dom = dominance_matrix(arr)
    remaining = np.ones(arr.shape[0], dtype=bool)
    order: List[int] = []
    labels: List[int] = []
    label = 0
    while remaining.any():
        # a remaining point is on the current front if no remaining point dominates it
        dominated = (dom & remaining[:, None]).any(axis=0)
        front = np.flatnonzero(remaining & ~dominated)
        local = epsilon_net_sort(arr[front])
        order.extend(int(front[i]) for i in local)
        labels.extend([label] * len(front))
        remaining[front] = False
        label += 1
    return RankedIndices(tuple(order), tuple(labels))


def top_k_nd(points, k: int) -> List[int]:
    arr = as_objectives(points, allow_empty=True)
    if k < 0:
        raise ContractError(f"k must be non-negative, got {k}")
    if k > arr.shape[0]:
        raise ContractError(f"k={k} exceeds the number of points ({arr.shape[0]})")
    if k == 0:
        return []
    return list(nondominated_sort(arr).order[:k])
