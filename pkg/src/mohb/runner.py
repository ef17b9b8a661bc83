"""Multi-seed studies over the Hyperband method matrix, tables and curves."""
from __future__ import annotations

import csv
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from .benchio import BenchmarkTable, TransferCorpus
from .core import ContractError, round_half_away
from .scalarize import DEFAULT_RHO
from .scheduler import RunTrace, UniformSampler, make_ranker, run_hyperband
from .transfer import DEFAULT_SIGMA_FLOOR, TransferSampler, check_corpus_matches, fit_surrogate


@dataclass(frozen=True)
class MethodSpec:
    label: str
    sampler: str
    ranker: str

    @property
    def needs_corpus(self) -> bool:
        return self.sampler == "transfer"


METHODS: Dict[str, MethodSpec] = {
    m.label: m
    for m in (
        MethodSpec("HB", "uniform", "error-only"),
        MethodSpec("HB+ND", "uniform", "nd"),
        MethodSpec("HB+RW", "uniform", "linear"),
        MethodSpec("HB+Parego", "uniform", "parego"),
        MethodSpec("HB+HV", "uniform", "hv"),
        MethodSpec("HB+tr", "transfer", "error-only"),
        MethodSpec("HB+ND+tr", "transfer", "nd"),
    )
}

DEFAULT_SEEDS = tuple(range(30))


def method(label: str) -> MethodSpec:
    try:
        return METHODS[label]
    except KeyError:
        raise ContractError(f"unknown method {label!r}; choose from {', '.join(METHODS)}") from None


@dataclass(frozen=True)
class SeedResult:
    method: str
    seed: int
    final_error: float
    total_runtime: float
    total_cost: float
    n_evaluations: int


@dataclass
class StudyResult:
    methods: List[str]
    seeds: List[int]
    runs: List[SeedResult]
    has_cost: bool = True
    traces: Dict[Tuple[str, int], RunTrace] = field(default_factory=dict, repr=False)

    def of(self, label: str) -> List[SeedResult]:
        return [r for r in self.runs if r.method == label]

    def means(self, label: str) -> Tuple[float, float, float]:
        rows = self.of(label)
        if not rows:
            raise ContractError(f"no runs for method {label!r}")
        return (
            float(np.mean([r.final_error for r in rows])),
            float(np.mean([r.total_runtime for r in rows])),
            float(np.mean([r.total_cost for r in rows])),
        )

    def percentages(self, label: str, baseline: str = "HB") -> Tuple[int, int, int]:
        return tuple(percentage(b, v) for b, v in zip(self.means(baseline), self.means(label)))


def percentage(baseline_mean: float, method_mean: float) -> int:
    """``round(100 * baseline / method)``: above 100 means the method is better."""
    if method_mean == 0:
        if baseline_mean == 0:
            return 100
        raise ZeroDivisionError("method mean is zero while the baseline mean is not")
    return round_half_away(100.0 * baseline_mean / method_mean)


def final_error(trace: RunTrace, error_index: int) -> float:
    """Lowest error among the events at the highest fidelity the run reached."""
    top = trace.max_fidelity()
    return min(ev.objectives[error_index] for ev in trace.events if ev.fidelity == top)


def _build_sampler(spec: MethodSpec, bench, surrogate, sigma_floor):
    if spec.sampler == "uniform":
        return UniformSampler(bench.n_configs)
    if surrogate is None:
        raise ContractError(f"method {spec.label} needs a transfer corpus")
    return TransferSampler(surrogate, sigma_floor)


def _run_one(args):
    label, seed, bench, surrogate, R, eta, rho, sigma_floor = args
    spec = method(label)
    err_idx = bench.error_index if bench.error_index is not None else 0
    sampler = _build_sampler(spec, bench, surrogate, sigma_floor)
    ranker = make_ranker(spec.ranker, error_index=err_idx, rho=rho)
    trace = run_hyperband(R, eta, sampler, ranker, bench, seed)
    res = SeedResult(label, seed, final_error(trace, err_idx), trace.total_runtime, trace.total_cost, len(trace.events))
    return res, trace


def run_study(
    bench: BenchmarkTable,
    corpus: Optional[TransferCorpus],
    methods: Sequence[str],
    seeds: Sequence[int] = DEFAULT_SEEDS,
    R: Optional[int] = None,
    eta: int = 3,
    *,
    rho: float = DEFAULT_RHO,
    sigma_floor: float = DEFAULT_SIGMA_FLOOR,
    workers: int = 1,
    keep_traces: bool = True,
) -> StudyResult:
    """Run every (method, seed) pair; results are ordered by (method, seed).

    ``R`` defaults to the benchmark's maximum fidelity.
    """
    if not methods:
        raise ContractError("no methods given")
    specs = [method(m) for m in methods]
    R = bench.max_fidelity if R is None else R
    surrogate = None
    if any(s.needs_corpus for s in specs):
        if corpus is None:
            raise ContractError("transfer methods need a corpus")
        check_corpus_matches(corpus, bench)
        surrogate = fit_surrogate(corpus)
    jobs = [(s.label, int(seed), bench, surrogate, R, eta, rho, sigma_floor) for s in specs for seed in seeds]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outputs = list(pool.map(_run_one, jobs))
    else:
        outputs = [_run_one(j) for j in jobs]
    result = StudyResult([s.label for s in specs], [int(s) for s in seeds], [o[0] for o in outputs], bench.cost_index is not None)
    if keep_traces:
        result.traces = {(r.method, r.seed): t for r, t in outputs}
    return result


# --------------------------------------------------------------------------
# exports

def format_table(result: StudyResult, baseline: str = "HB") -> str:
    """Rows ``method | error | runtime (h) | cost ($)`` as ``mean (percentage)``."""
    if not result.methods:
        raise ContractError("empty method list")
    has_base = baseline in result.methods
    headers = ["method", "error", "runtime_h"] + (["cost_usd"] if result.has_cost else [])
    rows = []
    for label in result.methods:
        err, rt, cost = result.means(label)
        pct = result.percentages(label, baseline) if has_base else None
        vals = [err, rt / 3600.0, cost][: len(headers) - 1]
        cells = [label]
        for i, v in enumerate(vals):
            cells.append(f"{v:.2f}" + (f" ({pct[i]})" if pct else ""))
        rows.append(cells)
    widths = [max(len(r[i]) for r in rows + [headers]) for i in range(len(headers))]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    for r in rows:
        lines.append("  ".join([r[0].ljust(widths[0])] + [c.rjust(w) for c, w in zip(r[1:], widths[1:])]))
    return "\n".join(lines) + "\n"


def export_table(result: StudyResult, path, baseline: str = "HB") -> None:
    text = format_table(result, baseline)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def best_error_curve(trace: RunTrace, axis: str, error_index: int) -> Tuple[np.ndarray, np.ndarray]:
    """Best error seen so far against cumulative runtime or cost, one point per event."""
    attr = {"runtime": "cumulative_runtime", "cost": "cumulative_cost"}[axis]
    x = np.array([getattr(ev, attr) for ev in trace.events])
    y = np.minimum.accumulate([ev.objectives[error_index] for ev in trace.events])
    return x, y


def convergence_curves(traces: Sequence[RunTrace], axis: str, error_index: int) -> List[Tuple[float, float, float]]:
    """Mean and standard error over seeds of best-error-so-far, at the union of event boundaries.

    Each seed contributes a step function; the grid starts where every seed
    has at least one evaluation.
    """
    curves = [best_error_curve(t, axis, error_index) for t in traces]
    start = max(x[0] for x, _ in curves)
    grid = np.unique(np.concatenate([x for x, _ in curves]))
    grid = grid[grid >= start]
    out = []
    for g in grid:
        vals = np.array([y[np.searchsorted(x, g, side="right") - 1] for x, y in curves])
        stderr = float(vals.std(ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else 0.0
        out.append((float(g), float(vals.mean()), stderr))
    return out


def export_convergence(result: StudyResult, path, error_index: int = 0) -> None:
    if not result.traces:
        raise ContractError("study was run without keeping traces")
    axes = ["runtime"] + (["cost"] if result.has_cost else [])
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["method", "axis", "x", "mean", "stderr"])
        for label in result.methods:
            traces = [result.traces[(label, s)] for s in result.seeds]
            for axis in axes:
                for x, mean, se in convergence_curves(traces, axis, error_index):
                    writer.writerow([label, axis, repr(x), repr(mean), repr(se)])


def cost_to_reach(trace: RunTrace, threshold: float, error_index: int, axis: str = "cost") -> float:
    """Cumulative runtime/cost at the first event with error <= threshold (inf if never)."""
    attr = {"runtime": "cumulative_runtime", "cost": "cumulative_cost"}[axis]
    for ev in trace.events:
        if ev.objectives[error_index] <= threshold:
            return getattr(ev, attr)
    return math.inf
