"""Tabular benchmarks, hardware cost models, transfer corpora and their files.

All files are JSON Lines: one header record followed by data records, each
tagged with a ``type`` field. Floats are written with ``repr`` precision so a
save/load/save cycle is byte-identical.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.stats import norm

from .core import ContractError, SeededRng

AMORTIZATION_SECONDS = 3600 * 24 * 200

# Device prices of the HW-NAS-Bench hardware, in dollars.
EDGE_PRICES = {
    "gpu1080": 800.0,
    "edgegpu": 499.0,
    "raspi4": 99.99,
    "edgetpu": 129.99,
    "pixel3": 140.0,
    "eyeriss": 2500.0,
    "fpga": 2500.0,
}

ERROR = "error"
RUNTIME = "runtime_s"
COST = "cost_usd"


class BenchmarkFormatError(ValueError):
    pass


@dataclass(frozen=True)
class ConfigRow:
    params: Tuple[Tuple[str, object], ...]
    hardware: Optional[str] = None

    @classmethod
    def make(cls, params: Mapping[str, object], hardware: Optional[str] = None) -> "ConfigRow":
        return cls(tuple(sorted(params.items())), hardware)

    def to_record(self) -> dict:
        rec = {"params": dict(self.params)}
        if self.hardware is not None:
            rec["hardware"] = self.hardware
        return rec


@dataclass(frozen=True, eq=False)
class BenchmarkTable:
    """Lookup table ``(config, fidelity) -> objective vector``.

    ``cells`` has shape ``(n_configs, n_fidelities, m)``.
    """

    name: str
    objective_names: Tuple[str, ...]
    configs: Tuple[ConfigRow, ...]
    fidelities: Tuple[int, ...]
    cells: np.ndarray

    def __post_init__(self):
        cells = np.array(self.cells, dtype=float)
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "objective_names", tuple(self.objective_names))
        object.__setattr__(self, "configs", tuple(self.configs))
        object.__setattr__(self, "fidelities", tuple(int(f) for f in self.fidelities))
        self._validate()
        object.__setattr__(self, "_fid_index", {f: i for i, f in enumerate(self.fidelities)})

    def _validate(self):
        n, nf, m = len(self.configs), len(self.fidelities), len(self.objective_names)
        if n == 0 or nf == 0 or m == 0:
            raise BenchmarkFormatError("benchmark needs at least one config, fidelity and objective")
        if self.cells.shape != (n, nf, m):
            raise BenchmarkFormatError(f"cells shape {self.cells.shape} != {(n, nf, m)}")
        if list(self.fidelities) != sorted(set(self.fidelities)) or self.fidelities[0] < 1:
            raise BenchmarkFormatError(f"fidelities must be strictly increasing positive integers: {self.fidelities}")
        if len(set(self.configs)) != n:
            raise BenchmarkFormatError("duplicate config rows")
        bad = np.argwhere(~np.isfinite(self.cells))
        if len(bad):
            c, f, o = bad[0]
            raise BenchmarkFormatError(
                f"non-finite value at config {c}, fidelity {self.fidelities[f]}, objective {self.objective_names[o]}"
            )
        if self.runtime_index is not None:
            col = self.cells[:, :, self.runtime_index]
            if np.any(col <= 0):
                c, f = np.argwhere(col <= 0)[0]
                raise BenchmarkFormatError(f"runtime must be positive (config {c}, fidelity {self.fidelities[f]})")
        if self.error_index is not None:
            col = self.cells[:, :, self.error_index]
            if np.any((col < 0) | (col > 1)):
                c, f = np.argwhere((col < 0) | (col > 1))[0]
                raise BenchmarkFormatError(f"error outside [0, 1] (config {c}, fidelity {self.fidelities[f]})")

    @property
    def n_configs(self) -> int:
        return len(self.configs)

    @property
    def max_fidelity(self) -> int:
        return self.fidelities[-1]

    @property
    def error_index(self) -> Optional[int]:
        return self.objective_names.index(ERROR) if ERROR in self.objective_names else None

    @property
    def runtime_index(self) -> Optional[int]:
        return self.objective_names.index(RUNTIME) if RUNTIME in self.objective_names else None

    @property
    def cost_index(self) -> Optional[int]:
        return self.objective_names.index(COST) if COST in self.objective_names else None

    def lookup(self, config: int, fidelity: int) -> np.ndarray:
        fi = self._fid_index.get(int(fidelity))
        if fi is None or not 0 <= config < self.n_configs:
            raise KeyError(f"benchmark {self.name!r} has no cell (config={config}, fidelity={fidelity})")
        return self.cells[config, fi]

    def charge(self, config: int, fidelity: int) -> Tuple[float, float]:
        """Simulated (runtime seconds, cost dollars) of one evaluation."""
        y = self.lookup(config, fidelity)
        runtime = float(y[self.runtime_index]) if self.runtime_index is not None else 0.0
        cost = float(y[self.cost_index]) if self.cost_index is not None else 0.0
        return runtime, cost

    def at_fidelity(self, fidelity: int) -> np.ndarray:
        return self.cells[:, self._fid_index[int(fidelity)], :]

    def __eq__(self, other):
        if not isinstance(other, BenchmarkTable):
            return NotImplemented
        return (
            self.name == other.name
            and self.objective_names == other.objective_names
            and self.configs == other.configs
            and self.fidelities == other.fidelities
            and np.array_equal(self.cells, other.cells)
        )


@dataclass(frozen=True, eq=False)
class TransferCorpus:
    """Full-fidelity objectives of ``n`` configs on ``T`` related tasks; ``y`` is ``(n, T, m)``."""

    configs: Tuple[ConfigRow, ...]
    tasks: Tuple[str, ...]
    objective_names: Tuple[str, ...]
    y: np.ndarray

    def __post_init__(self):
        y = np.array(self.y, dtype=float)
        y.setflags(write=False)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "configs", tuple(self.configs))
        object.__setattr__(self, "tasks", tuple(self.tasks))
        object.__setattr__(self, "objective_names", tuple(self.objective_names))
        n, t, m = len(self.configs), len(self.tasks), len(self.objective_names)
        if n < 2 or t < 1 or m < 1:
            raise ContractError(f"corpus needs n >= 2, T >= 1, m >= 1 (got {n}, {t}, {m})")
        if y.shape != (n, t, m):
            raise BenchmarkFormatError(f"corpus shape {y.shape} != {(n, t, m)}")
        if not np.all(np.isfinite(y)):
            c, j, o = np.argwhere(~np.isfinite(y))[0]
            raise BenchmarkFormatError(f"non-finite corpus value at config {c}, task {self.tasks[j]}")
        if len(set(self.tasks)) != t:
            raise BenchmarkFormatError("duplicate task names")

    def __eq__(self, other):
        if not isinstance(other, TransferCorpus):
            return NotImplemented
        return (
            self.configs == other.configs
            and self.tasks == other.tasks
            and self.objective_names == other.objective_names
            and np.array_equal(self.y, other.y)
        )


@dataclass(frozen=True)
class Hardware:
    name: str
    batch_runtime: Optional[float] = None
    price_per_second: Optional[float] = None
    total_price: Optional[float] = None
    amortization_seconds: float = AMORTIZATION_SECONDS

    @property
    def gamma(self) -> float:
        """Cost per second of this hardware."""
        if self.price_per_second is not None:
            return self.price_per_second
        if self.total_price is not None:
            return self.total_price / self.amortization_seconds
        raise ContractError(f"hardware {self.name!r} has neither a per-second price nor a total price")


@dataclass(frozen=True)
class HardwareCostModel:
    hardware: Tuple[Hardware, ...]
    reference: Optional[str] = None

    def __post_init__(self):
        object.__setattr__(self, "hardware", tuple(self.hardware))
        names = [h.name for h in self.hardware]
        if not names:
            raise ContractError("hardware model is empty")
        if len(set(names)) != len(names):
            raise ContractError("duplicate hardware names")
        for h in self.hardware:
            if h.gamma < 0:
                raise ContractError(f"negative price for hardware {h.name!r}")
            if h.amortization_seconds <= 0:
                raise ContractError(f"non-positive amortization for hardware {h.name!r}")

    def get(self, name: str) -> Hardware:
        for h in self.hardware:
            if h.name == name:
                return h
        raise ContractError(f"unknown hardware {name!r}")

    def reference_hardware(self) -> Hardware:
        if self.reference is None:
            raise ContractError("hardware model declares no reference hardware")
        ref = self.get(self.reference)
        if not ref.batch_runtime or ref.batch_runtime <= 0:
            raise ContractError(f"reference hardware {ref.name!r} needs a positive batch runtime")
        return ref

    @classmethod
    def edge(cls, prices: Mapping[str, float] = EDGE_PRICES, amortization_seconds: float = AMORTIZATION_SECONDS):
        return cls(tuple(Hardware(n, total_price=p, amortization_seconds=amortization_seconds) for n, p in prices.items()))


# --------------------------------------------------------------------------
# expansions

def _expand(base: BenchmarkTable, hardware: Sequence[Hardware], ratio: Callable[[int, Hardware], float], name: str):
    rt = base.runtime_index
    if rt is None:
        raise ContractError(f"benchmark {base.name!r} has no {RUNTIME!r} objective to scale")
    names = list(base.objective_names)
    has_cost = COST in names
    if not has_cost:
        names.append(COST)
    ci = names.index(COST)
    configs, rows = [], []
    for c, row in enumerate(base.configs):
        if row.hardware is not None:
            raise ContractError(f"config {c} already carries hardware {row.hardware!r}")
        for h in hardware:
            cells = np.zeros((len(base.fidelities), len(names)))
            cells[:, : base.cells.shape[2]] = base.cells[c]
            cells[:, rt] = base.cells[c, :, rt] * ratio(c, h)
            cells[:, ci] = h.gamma * cells[:, rt]
            configs.append(ConfigRow(row.params, h.name))
            rows.append(cells)
    return BenchmarkTable(name, tuple(names), tuple(configs), base.fidelities, np.stack(rows))


def expand_cloud(base: BenchmarkTable, model: HardwareCostModel, name: Optional[str] = None) -> BenchmarkTable:
    """Product grid configs x hardware with runtime scaled by ``r_h / r_ref`` and cost ``gamma_h * runtime``."""
    ref = model.reference_hardware()
    for h in model.hardware:
        if h.batch_runtime is None or h.batch_runtime <= 0:
            raise ContractError(f"hardware {h.name!r} needs a positive batch runtime for cloud expansion")
    return _expand(base, model.hardware, lambda c, h: h.batch_runtime / ref.batch_runtime, name or f"{base.name}-cloud")


@dataclass(frozen=True)
class LatencyTable:
    """Per-config base latency and per-(config, hardware) device latency, in seconds."""

    base: Tuple[float, ...]
    latency: Tuple[Dict[str, float], ...]

    def ratio(self, config: int, hardware: str) -> float:
        try:
            lat = self.latency[config][hardware]
        except (IndexError, KeyError):
            raise ContractError(f"missing latency for config {config} on hardware {hardware!r}") from None
        if config >= len(self.base) or self.base[config] <= 0:
            raise ContractError(f"missing or non-positive base latency for config {config}")
        return lat / self.base[config]


def expand_edge(base: BenchmarkTable, latencies: LatencyTable, model: Optional[HardwareCostModel] = None, name=None):
    """Runtime scaled by device latency over base latency; cost from amortized device price."""
    model = model or HardwareCostModel.edge()
    if len(latencies.base) != base.n_configs:
        raise ContractError(f"latency table covers {len(latencies.base)} configs, benchmark has {base.n_configs}")
    return _expand(base, model.hardware, lambda c, h: latencies.ratio(c, h.name), name or f"{base.name}-edge")


def expand_corpus(corpus: TransferCorpus, hardware: Sequence[Hardware], ratio: Callable[[int, Hardware], float]):
    """Apply the same runtime/cost expansion to a transfer corpus."""
    if RUNTIME not in corpus.objective_names:
        raise ContractError(f"corpus has no {RUNTIME!r} objective")
    rt = corpus.objective_names.index(RUNTIME)
    names = list(corpus.objective_names)
    if COST not in names:
        names.append(COST)
    ci = names.index(COST)
    configs, rows = [], []
    for c, row in enumerate(corpus.configs):
        for h in hardware:
            y = np.zeros((len(corpus.tasks), len(names)))
            y[:, : corpus.y.shape[2]] = corpus.y[c]
            y[:, rt] = corpus.y[c, :, rt] * ratio(c, h)
            y[:, ci] = h.gamma * y[:, rt]
            configs.append(ConfigRow(row.params, h.name))
            rows.append(y)
    return TransferCorpus(tuple(configs), corpus.tasks, tuple(names), np.stack(rows))


def expand_corpus_cloud(corpus: TransferCorpus, model: HardwareCostModel) -> TransferCorpus:
    ref = model.reference_hardware()
    return expand_corpus(corpus, model.hardware, lambda c, h: h.batch_runtime / ref.batch_runtime)


def corpus_from_tables(tables: Sequence[BenchmarkTable], tasks: Optional[Sequence[str]] = None) -> TransferCorpus:
    """Stack the max-fidelity objectives of same-grid tables into a corpus."""
    if not tables:
        raise ContractError("need at least one task table")
    first = tables[0]
    for t in tables[1:]:
        if t.configs != first.configs or t.objective_names != first.objective_names:
            raise ContractError(f"table {t.name!r} does not share the config grid of {first.name!r}")
    y = np.stack([t.at_fidelity(t.max_fidelity) for t in tables], axis=1)
    return TransferCorpus(first.configs, tuple(tasks or [t.name for t in tables]), first.objective_names, y)


# --------------------------------------------------------------------------
# file formats

def _dump(records: Iterable[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(json.dumps(rec, allow_nan=False) + "\n")


def _read(path) -> List[dict]:
    records = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                records.append(json.loads(line))
            except json.JSONDecodeError as exc:
                raise BenchmarkFormatError(f"{path}:{lineno}: invalid JSON ({exc.msg})") from None
    if not records:
        raise BenchmarkFormatError(f"{path}: empty file")
    return records


def _header(records, kind: str, path) -> dict:
    head = records[0]
    if head.get("type") != kind:
        raise BenchmarkFormatError(f"{path}: first record must be a {kind!r} header, got {head.get('type')!r}")
    return head


def _floats(values, where: str) -> List[float]:
    out = []
    for v in values:
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(v):
            raise BenchmarkFormatError(f"{where}: non-finite or non-numeric value {v!r}")
        out.append(float(v))
    return out


def _configs_section(records, path) -> Tuple[List[ConfigRow], List[dict]]:
    rows: Dict[int, ConfigRow] = {}
    rest = []
    for rec in records:
        if rec.get("type") == "config":
            idx = rec.get("config")
            if not isinstance(idx, int) or idx < 0:
                raise BenchmarkFormatError(f"{path}: bad config index {idx!r}")
            if idx in rows:
                raise BenchmarkFormatError(f"{path}: duplicate config row {idx}")
            rows[idx] = ConfigRow.make(rec.get("params", {}), rec.get("hardware"))
        else:
            rest.append(rec)
    if sorted(rows) != list(range(len(rows))):
        raise BenchmarkFormatError(f"{path}: config indices must be 0..n-1")
    configs = [rows[i] for i in range(len(rows))]
    seen: Dict[ConfigRow, int] = {}
    for i, row in enumerate(configs):
        if row in seen:
            raise BenchmarkFormatError(f"{path}: config {i} duplicates config {seen[row]}")
        seen[row] = i
    return configs, rest


def _config_records(configs: Sequence[ConfigRow]):
    for i, row in enumerate(configs):
        yield {"type": "config", "config": i, **row.to_record()}


def save_benchmark(table: BenchmarkTable, path) -> None:
    def records():
        yield {
            "type": "benchmark",
            "name": table.name,
            "objective_names": list(table.objective_names),
            "fidelities": list(table.fidelities),
            "config_schema": sorted({k for row in table.configs for k, _ in row.params}),
        }
        yield from _config_records(table.configs)
        for c in range(table.n_configs):
            for fi, f in enumerate(table.fidelities):
                yield {"type": "cell", "config": c, "fidelity": f, "y": [float(v) for v in table.cells[c, fi]]}

    _dump(records(), path)


def load_benchmark(path) -> BenchmarkTable:
    records = _read(path)
    head = _header(records, "benchmark", path)
    names = tuple(head.get("objective_names", ()))
    fids = head.get("fidelities", [])
    if list(fids) != sorted(set(fids)):
        raise BenchmarkFormatError(f"{path}: fidelities must be sorted and unique: {fids}")
    configs, cells_recs = _configs_section(records[1:], path)
    fid_index = {f: i for i, f in enumerate(fids)}
    cells = np.full((len(configs), len(fids), len(names)), np.nan)
    filled = np.zeros((len(configs), len(fids)), dtype=bool)
    for rec in cells_recs:
        if rec.get("type") != "cell":
            raise BenchmarkFormatError(f"{path}: unexpected record type {rec.get('type')!r}")
        c, f = rec.get("config"), rec.get("fidelity")
        if not isinstance(c, int) or not 0 <= c < len(configs) or f not in fid_index:
            raise BenchmarkFormatError(f"{path}: cell (config={c}, fidelity={f}) is outside the declared grid")
        if filled[c, fid_index[f]]:
            raise BenchmarkFormatError(f"{path}: duplicate cell (config={c}, fidelity={f})")
        y = _floats(rec.get("y", []), f"{path}: cell (config={c}, fidelity={f})")
        if len(y) != len(names):
            raise BenchmarkFormatError(f"{path}: cell (config={c}, fidelity={f}) has {len(y)} objectives, expected {len(names)}")
        cells[c, fid_index[f]] = y
        filled[c, fid_index[f]] = True
    missing = np.argwhere(~filled)
    if len(missing):
        c, fi = missing[0]
        raise BenchmarkFormatError(f"{path}: missing cell (config={c}, fidelity={fids[fi]})")
    return BenchmarkTable(head.get("name", Path(path).stem), names, tuple(configs), tuple(fids), cells)


def save_corpus(corpus: TransferCorpus, path) -> None:
    def records():
        yield {"type": "corpus", "tasks": list(corpus.tasks), "objective_names": list(corpus.objective_names)}
        yield from _config_records(corpus.configs)
        for c in range(len(corpus.configs)):
            for j, task in enumerate(corpus.tasks):
                yield {"type": "obs", "config": c, "task": task, "y": [float(v) for v in corpus.y[c, j]]}

    _dump(records(), path)


def load_corpus(path) -> TransferCorpus:
    records = _read(path)
    head = _header(records, "corpus", path)
    tasks = list(head.get("tasks", []))
    names = tuple(head.get("objective_names", ()))
    configs, obs = _configs_section(records[1:], path)
    t_index = {t: j for j, t in enumerate(tasks)}
    y = np.full((len(configs), len(tasks), len(names)), np.nan)
    filled = np.zeros((len(configs), len(tasks)), dtype=bool)
    for rec in obs:
        c, task = rec.get("config"), rec.get("task")
        if rec.get("type") != "obs" or not isinstance(c, int) or not 0 <= c < len(configs) or task not in t_index:
            raise BenchmarkFormatError(f"{path}: bad observation record {rec!r}")
        if filled[c, t_index[task]]:
            raise BenchmarkFormatError(f"{path}: duplicate observation (config={c}, task={task})")
        vals = _floats(rec.get("y", []), f"{path}: observation (config={c}, task={task})")
        if len(vals) != len(names):
            raise BenchmarkFormatError(f"{path}: observation (config={c}, task={task}) has wrong length")
        y[c, t_index[task]] = vals
        filled[c, t_index[task]] = True
    missing = np.argwhere(~filled)
    if len(missing):
        c, j = missing[0]
        raise BenchmarkFormatError(f"{path}: corpus is off-grid, missing (config={c}, task={tasks[j]})")
    return TransferCorpus(tuple(configs), tuple(tasks), names, y)


def save_hardware_model(model: HardwareCostModel, path) -> None:
    def records():
        head = {"type": "hardware_model"}
        if model.reference is not None:
            head["reference"] = model.reference
        yield head
        for h in model.hardware:
            rec = {"type": "hardware", "name": h.name}
            if h.batch_runtime is not None:
                rec["batch_runtime"] = float(h.batch_runtime)
            if h.price_per_second is not None:
                rec["price_per_second"] = float(h.price_per_second)
            if h.total_price is not None:
                rec["total_price"] = float(h.total_price)
                rec["amortization_seconds"] = float(h.amortization_seconds)
            yield rec

    _dump(records(), path)


def load_hardware_model(path) -> HardwareCostModel:
    records = _read(path)
    head = _header(records, "hardware_model", path)
    hardware = []
    for rec in records[1:]:
        if rec.get("type") != "hardware" or "name" not in rec:
            raise BenchmarkFormatError(f"{path}: bad hardware record {rec!r}")
        nums = {k: rec[k] for k in ("batch_runtime", "price_per_second", "total_price", "amortization_seconds") if k in rec}
        _floats(nums.values(), f"{path}: hardware {rec['name']!r}")
        if "price_per_second" not in nums and "total_price" not in nums:
            raise BenchmarkFormatError(f"{path}: hardware {rec['name']!r} needs price_per_second or total_price")
        hardware.append(Hardware(rec["name"], **{k: float(v) for k, v in nums.items()}))
    model = HardwareCostModel(tuple(hardware), head.get("reference"))
    if model.reference is not None:
        model.get(model.reference)
    return model


def save_latency_table(lat: LatencyTable, path) -> None:
    _dump(
        [{"type": "latency_table"}]
        + [
            {"type": "latency", "config": c, "base": float(b), "latency": {k: float(v) for k, v in lat.latency[c].items()}}
            for c, b in enumerate(lat.base)
        ],
        path,
    )


def load_latency_table(path) -> LatencyTable:
    records = _read(path)
    _header(records, "latency_table", path)
    rows = {}
    for rec in records[1:]:
        c = rec.get("config")
        if rec.get("type") != "latency" or not isinstance(c, int) or c in rows:
            raise BenchmarkFormatError(f"{path}: bad or duplicate latency record {rec!r}")
        lat = rec.get("latency", {})
        _floats([rec.get("base")] + list(lat.values()), f"{path}: latency config {c}")
        rows[c] = (float(rec["base"]), {k: float(v) for k, v in lat.items()})
    if sorted(rows) != list(range(len(rows))):
        raise BenchmarkFormatError(f"{path}: latency config indices must be 0..n-1")
    return LatencyTable(tuple(rows[c][0] for c in range(len(rows))), tuple(rows[c][1] for c in range(len(rows))))


# --------------------------------------------------------------------------
# synthetic generator

@dataclass(frozen=True)
class SyntheticSpec:
    """Knobs of the synthetic learning-curve benchmark.

    ``correlation`` is the correlation between the latent quality of a config
    on two different tasks. ``tradeoff`` in [0, 1) makes accurate configs
    slower. ``planted`` configs form the exact full-fidelity Pareto front of
    every task table.
    """

    n_configs: int = 100
    max_fidelity: int = 27
    n_objectives: int = 2
    n_tasks: int = 3
    correlation: float = 0.8
    planted: int = 3
    tradeoff: float = 0.5
    error_range: Tuple[float, float] = (0.05, 0.5)
    curve_amplitude: float = 0.3
    curve_exponent: float = 0.7
    epoch_seconds: float = 60.0
    runtime_spread: float = 0.8
    margin: float = 0.02
    name: str = "synthetic"

    def validate(self) -> None:
        if self.n_configs < 2:
            raise ContractError("n_configs must be >= 2")
        if self.max_fidelity < 1:
            raise ContractError("max_fidelity must be >= 1")
        if self.n_objectives < 1:
            raise ContractError("n_objectives must be >= 1")
        if self.n_tasks < 1:
            raise ContractError("n_tasks must be >= 1")
        if not 0.0 <= self.correlation <= 1.0:
            raise ContractError("correlation must lie in [0, 1]")
        if not 0.0 <= self.tradeoff < 1.0:
            raise ContractError("tradeoff must lie in [0, 1)")
        if not 1 <= self.planted <= self.n_configs:
            raise ContractError("planted must lie in [1, n_configs]")
        if self.n_objectives == 1 and self.planted != 1:
            raise ContractError("a single-objective benchmark has a planted front of size 1")
        lo, hi = self.error_range
        if not 0.0 <= lo < hi or hi + 1.5 * self.curve_amplitude + self.margin > 1.0:
            raise ContractError("error_range plus curve amplitude must stay inside [0, 1]")
        if self.curve_exponent <= 0 or self.epoch_seconds <= 0 or self.runtime_spread < 0 or self.margin <= 0:
            raise ContractError("curve_exponent, epoch_seconds, margin must be positive; runtime_spread >= 0")

    def objective_names(self) -> Tuple[str, ...]:
        names = [ERROR, RUNTIME][: self.n_objectives]
        names += [f"aux{k}" for k in range(1, self.n_objectives - 1)]
        return tuple(names)


@dataclass(frozen=True)
class SyntheticSuite:
    target: BenchmarkTable
    tasks: Tuple[BenchmarkTable, ...]
    corpus: TransferCorpus
    planted: Tuple[Tuple[int, ...], ...]  # per table: target first, then corpus tasks


def _task_table(spec: SyntheticSpec, configs, name, u, speed, aux, amp, task_speed) -> Tuple[BenchmarkTable, Tuple[int, ...]]:
    n, R = spec.n_configs, spec.max_fidelity
    lo, hi = spec.error_range
    order = np.argsort(u, kind="stable")
    planted = order[: spec.planted]
    others = order[spec.planted :]

    e_inf = lo + (hi - lo) * norm.cdf(u)
    e_inf[others] += spec.margin  # strict error gap to the planted set
    per_epoch = spec.epoch_seconds * np.exp(spec.runtime_spread * speed) * task_speed
    aux = aux.copy()
    if len(others):
        # the worst-error planted config is the cheapest overall, so it dominates every other config
        cheap = planted[-1]
        per_epoch[cheap] = per_epoch[others].min() / (1 + spec.margin) ** 2
        if aux.shape[1]:
            aux[cheap] = aux[others].min(axis=0) / (1 + spec.margin)
        # remaining planted points trade error for runtime so that none dominates another
        for rank, p in enumerate(planted[::-1]):
            per_epoch[p] = per_epoch[cheap] * (1 + spec.margin) ** (rank / max(1, spec.planted))
            if aux.shape[1]:
                aux[p] = aux[cheap]

    fids = np.arange(1, R + 1)
    if R > 1:
        shape = (fids.astype(float) ** -spec.curve_exponent - R**-spec.curve_exponent) / (1 - R**-spec.curve_exponent)
    else:
        shape = np.zeros(1)
    m = spec.n_objectives
    cells = np.zeros((n, R, m))
    cells[:, :, 0] = e_inf[:, None] + amp[:, None] * shape[None, :]
    if m >= 2:
        cells[:, :, 1] = per_epoch[:, None] * fids[None, :]
    for k in range(2, m):
        cells[:, :, k] = aux[:, k - 2][:, None]
    table = BenchmarkTable(name, spec.objective_names(), configs, tuple(int(f) for f in fids), cells)
    return table, tuple(sorted(int(p) for p in planted))


def generate_synthetic(spec: SyntheticSpec, rng: SeededRng) -> SyntheticSuite:
    """Target table plus ``n_tasks`` related task tables and their corpus.

    Error decreases with fidelity toward a per-config asymptote; runtime is
    proportional to fidelity. Task quality latents share a common component
    whose weight is set by ``correlation``.
    """
    spec.validate()
    n = spec.n_configs
    shared = rng.child("latent", "shared").normal(size=n)
    noise = rng.child("latent", "speed").normal(size=n)
    speed = -spec.tradeoff * shared + math.sqrt(1 - spec.tradeoff**2) * noise
    aux = np.exp(rng.child("latent", "aux").normal(size=(n, max(0, spec.n_objectives - 2))))
    amp = spec.curve_amplitude * (0.5 + rng.child("latent", "curve").random(n))
    configs = tuple(ConfigRow.make({"x0": int(i)}) for i in range(n))

    tables, planted = [], []
    for j in range(spec.n_tasks + 1):
        task_rng = rng.child("task", j)
        u = math.sqrt(spec.correlation) * shared + math.sqrt(1 - spec.correlation) * task_rng.normal(size=n)
        task_speed = float(np.exp(0.2 * task_rng.child("speed").normal()))
        name = spec.name if j == 0 else f"{spec.name}-task{j}"
        table, p = _task_table(spec, configs, name, u, speed, aux, amp, task_speed)
        tables.append(table)
        planted.append(p)
    corpus = corpus_from_tables(tables[1:])
    return SyntheticSuite(tables[0], tuple(tables[1:]), corpus, tuple(planted))


def synthetic_cloud_hardware(count: int, rng: SeededRng) -> HardwareCostModel:
    """Hardware list with wide runtime/price spread; ``hw0`` is the reference.

    Faster machines are pricier per hour, but sublinearly with noise, so the
    cost per job still varies by about an order of magnitude.
    """
    if count < 1:
        raise ContractError("count must be >= 1")
    speed = rng.child("speed").normal(0.0, 1.0, size=count)
    speed[0] = 0.0
    price_noise = rng.child("price").normal(0.0, 1.0, size=count)
    hardware = []
    for i in range(count):
        r_h = 0.004 * math.exp(speed[i])
        hourly = 1.0 * math.exp(-0.7 * speed[i] + price_noise[i])
        hardware.append(Hardware(f"hw{i}", batch_runtime=r_h, price_per_second=hourly / 3600.0))
    return HardwareCostModel(tuple(hardware), "hw0")
