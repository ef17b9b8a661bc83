"""Successive halving and Hyperband driven by pluggable sample / rank hooks.

A *sampler* is ``sampler(n, rng) -> list of config ids`` and a *ranker* is
``ranker(points, k, rng) -> list of k row indices`` over an ``(n, m)`` array
of objective vectors. Evaluations are tabular lookups; each one is charged
the runtime and cost recorded in the benchmark cell.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .benchio import BenchmarkTable
from .core import ContractError, SeededRng, as_objectives
from .pareto import pareto_front, top_k_nd
from .scalarize import DEFAULT_RHO, top_k_scalarized

Sampler = Callable[[int, SeededRng], Sequence[int]]
Ranker = Callable[[np.ndarray, int, SeededRng], Sequence[int]]


@dataclass(frozen=True)
class Rung:
    n: int
    fidelity: int


@dataclass(frozen=True)
class BracketPlan:
    s: int
    n0: int
    rungs: Tuple[Rung, ...]


def _int_log(R: int, eta: int) -> int:
    s = 0
    while eta ** (s + 1) <= R:
        s += 1
    return s


def plan_hyperband(R: int, eta: int = 3) -> List[BracketPlan]:
    """Brackets ``s = s_max .. 0`` with ``n0 = ceil((s_max+1) eta^s / (s+1))`` and ``r0 = R eta^-s``.

    Fidelities are rounded to the nearest integer and never drop below 1.
    """
    if R < 1:
        raise ContractError(f"R must be >= 1, got {R}")
    if eta < 2:
        raise ContractError(f"eta must be >= 2, got {eta}")
    s_max = _int_log(R, eta)
    plans = []
    for s in range(s_max, -1, -1):
        # ceil((B/R) * eta^s / (s+1)) in integer arithmetic, B = (s_max+1) R
        num = (s_max + 1) * eta**s
        n0 = -(-num // (s + 1))
        rungs = []
        for i in range(s + 1):
            n_i = max(1, n0 // eta**i)
            r_i = max(1, round(R / eta ** (s - i)))
            rungs.append(Rung(n_i, int(r_i)))
        plans.append(BracketPlan(s, n0, tuple(rungs)))
    return plans


@dataclass(frozen=True)
class TraceEvent:
    config: int
    fidelity: int
    objectives: Tuple[float, ...]
    cumulative_runtime: float
    cumulative_cost: float
    bracket: int
    rung: int


@dataclass
class RunTrace:
    events: List[TraceEvent] = field(default_factory=list)
    final_front: List[Tuple[int, Tuple[float, ...]]] = field(default_factory=list)

    @property
    def total_runtime(self) -> float:
        return self.events[-1].cumulative_runtime if self.events else 0.0

    @property
    def total_cost(self) -> float:
        return self.events[-1].cumulative_cost if self.events else 0.0

    def record(self, bench: BenchmarkTable, config: int, fidelity: int, bracket: int, rung: int) -> TraceEvent:
        try:
            y = bench.lookup(config, fidelity)
        except KeyError as exc:
            raise ContractError(exc.args[0]) from None
        runtime, cost = bench.charge(config, fidelity)
        ev = TraceEvent(
            int(config),
            int(fidelity),
            tuple(float(v) for v in y),
            self.total_runtime + runtime,
            self.total_cost + cost,
            bracket,
            rung,
        )
        self.events.append(ev)
        return ev

    def max_fidelity(self) -> int:
        return max(ev.fidelity for ev in self.events)

    def finalize(self) -> None:
        """Pareto front of the results at the highest fidelity reached in the run."""
        if not self.events:
            self.final_front = []
            return
        top = self.max_fidelity()
        results = {}
        for ev in self.events:
            if ev.fidelity == top:
                results.setdefault(ev.config, ev.objectives)
        configs = sorted(results)
        front = pareto_front([results[c] for c in configs])
        self.final_front = [(configs[i], results[configs[i]]) for i in sorted(front)]

    def to_json(self) -> str:
        return json.dumps(
            {
                "events": [
                    [e.config, e.fidelity, list(e.objectives), e.cumulative_runtime, e.cumulative_cost, e.bracket, e.rung]
                    for e in self.events
                ],
                "final_front": [[c, list(y)] for c, y in self.final_front],
            }
        )


def run_successive_halving(
    plan: BracketPlan,
    sampler: Sampler,
    ranker: Ranker,
    bench: BenchmarkTable,
    rng: SeededRng,
    trace: Optional[RunTrace] = None,
    eta: int = 3,
) -> RunTrace:
    """Evaluate every survivor at each rung and promote ``floor(n_i / eta)`` of them.

    Samplers are asked for ``n0`` configs; if the benchmark has fewer, all of
    them enter the bracket and rung sizes are capped accordingly, which keeps
    the evaluation count independent of the ranking strategy. The last rung
    keeps its survivors.
    """
    trace = trace if trace is not None else RunTrace()
    n_start = min(plan.n0, bench.n_configs)
    configs = [int(c) for c in sampler(n_start, rng.child("bracket", plan.s, "sample"))]
    if len(configs) != n_start or len(set(configs)) != n_start:
        raise ContractError(f"sampler returned {len(configs)} configs ({len(set(configs))} distinct), expected {n_start}")
    for i, rung in enumerate(plan.rungs):
        results = [trace.record(bench, c, rung.fidelity, plan.s, i).objectives for c in configs]
        if i == len(plan.rungs) - 1:
            break
        k = min(len(configs), max(1, rung.n // eta))
        keep = ranker(as_objectives(results), k, rng.child("bracket", plan.s, "rung", i, "rank"))
        configs = [configs[j] for j in keep]
    return trace


def run_hyperband(
    R: int,
    eta: int,
    sampler: Sampler,
    ranker: Ranker,
    bench: BenchmarkTable,
    seed: int,
) -> RunTrace:
    rng = SeededRng(seed)
    trace = RunTrace()
    for plan in plan_hyperband(R, eta):
        run_successive_halving(plan, sampler, ranker, bench, rng, trace, eta)
    trace.finalize()
    return trace


# --------------------------------------------------------------------------
# strategies

def rank_single_objective(points, k: int, objective_index: int = 0) -> List[int]:
    arr = as_objectives(points, allow_empty=True)
    if arr.shape[0] and not 0 <= objective_index < arr.shape[1]:
        raise ContractError(f"objective index {objective_index} out of range for m={arr.shape[1]}")
    if not 0 <= k <= arr.shape[0]:
        raise ContractError(f"k={k} out of range for {arr.shape[0]} points")
    if k == 0:
        return []
    return [int(i) for i in np.argsort(arr[:, objective_index], kind="stable")[:k]]


class UniformSampler:
    """Distinct configs drawn uniformly at random."""

    def __init__(self, n_configs: int):
        self.n_configs = n_configs

    def __call__(self, n: int, rng: SeededRng) -> List[int]:
        return [int(c) for c in rng.choice(self.n_configs, size=min(n, self.n_configs), replace=False)]


def make_ranker(name: str, *, error_index: int = 0, rho: float = DEFAULT_RHO) -> Ranker:
    if name == "error-only":
        return lambda points, k, rng: rank_single_objective(points, k, error_index)
    if name == "nd":
        return lambda points, k, rng: top_k_nd(points, k)
    if name in ("linear", "parego", "hv"):
        return lambda points, k, rng: top_k_scalarized(points, k, name, rng, rho=rho)
    raise ContractError(f"unknown ranker {name!r}")
