"""``mohb`` command line: gen | expand | run.

Exit status is 0 on success, 2 on usage errors and 1 on runtime errors.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import benchio
from .core import SeededRng
from .runner import DEFAULT_SEEDS, METHODS, export_convergence, export_table, method, run_study
from .scalarize import DEFAULT_RHO
from .transfer import DEFAULT_SIGMA_FLOOR

log = logging.getLogger("mohb")


def _positive_int(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def parse_seeds(text: str):
    """``"0..29"`` (inclusive) or ``"0,3,7"``."""
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            seeds = list(range(int(lo), int(hi) + 1))
        else:
            seeds = [int(s) for s in text.split(",") if s.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"bad seed range {text!r}") from None
    if not seeds or min(seeds) < 0:
        raise argparse.ArgumentTypeError(f"bad seed range {text!r}")
    return seeds


def _methods(text: str):
    labels = [m.strip() for m in text.split(",") if m.strip()]
    if not labels:
        raise argparse.ArgumentTypeError("no methods given")
    for label in labels:
        if label not in METHODS:
            raise argparse.ArgumentTypeError(f"unknown method {label!r}; choose from {', '.join(METHODS)}")
    return labels


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mohb", description="Multi-objective Hyperband on tabular benchmarks.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a synthetic benchmark and transfer corpus")
    gen.add_argument("--configs", type=_positive_int, default=100)
    gen.add_argument("--fidelities", type=_positive_int, default=27, help="maximum fidelity R; levels are 1..R")
    gen.add_argument("--tasks", type=_positive_int, default=3, help="number of related corpus tasks")
    gen.add_argument("--objectives", type=_positive_int, default=2)
    gen.add_argument("--correlation", type=float, default=0.8)
    gen.add_argument("--planted", type=_positive_int, default=None, help="size of the planted front (default 3, 1 if m=1)")
    gen.add_argument("--tradeoff", type=float, default=0.5)
    gen.add_argument("--hardware", type=int, default=0, metavar="K", help="also write a synthetic K-machine cloud model")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--name", default="synthetic")
    gen.add_argument("--out", type=Path, default=Path("."), help="output directory")

    exp = sub.add_parser("expand", help="expand a benchmark over hardware choices")
    exp.add_argument("--benchmark", type=Path, required=True)
    exp.add_argument("--mode", choices=("cloud", "edge"), default="cloud")
    exp.add_argument("--hardware", type=Path, help="hardware model file (edge mode defaults to the device price table)")
    exp.add_argument("--latency", type=Path, help="latency table (edge mode)")
    exp.add_argument("--corpus", type=Path, help="transfer corpus to expand alongside")
    exp.add_argument("--out", type=Path, required=True)
    exp.add_argument("--corpus-out", type=Path)

    run = sub.add_parser("run", help="run a multi-seed study")
    run.add_argument("--config", type=Path, help="JSON file of defaults; explicit flags win")
    run.add_argument("--benchmark", type=Path)
    run.add_argument("--corpus", type=Path)
    run.add_argument("--methods", type=_methods, default=list(METHODS))
    run.add_argument("--seeds", type=parse_seeds, default=list(DEFAULT_SEEDS))
    run.add_argument("--R", type=_positive_int, default=None, help="maximum fidelity (default: the benchmark's)")
    run.add_argument("--eta", type=int, default=3)
    run.add_argument("--rho", type=float, default=DEFAULT_RHO)
    run.add_argument("--sigma-floor", type=float, default=DEFAULT_SIGMA_FLOOR, help="std floor of the surrogate")
    run.add_argument("--workers", type=_positive_int, default=1)
    run.add_argument("--out", type=Path, default=Path("results"))
    parser.run_parser = run
    return parser


def _apply_config_file(parser, args, argv):
    """Re-parse with the config file's values as defaults."""
    try:
        cfg = json.loads(args.config.read_text())
    except (OSError, json.JSONDecodeError) as exc:
        parser.error(f"cannot read config file {args.config}: {exc}")
    run_parser = parser.run_parser
    known = {a.dest for a in run_parser._actions}
    defaults = {}
    for key, value in cfg.items():
        dest = key.replace("-", "_")
        if dest not in known:
            parser.error(f"unknown key {key!r} in config file")
        if dest == "seeds" and isinstance(value, str):
            value = parse_seeds(value)
        elif dest == "methods" and isinstance(value, str):
            value = _methods(value)
        elif dest in ("benchmark", "corpus", "out") and value is not None:
            value = Path(value)
        defaults[dest] = value
    run_parser.set_defaults(**defaults)
    return parser.parse_args(argv)


def cmd_gen(args) -> int:
    planted = args.planted or (1 if args.objectives == 1 else 3)
    spec = benchio.SyntheticSpec(
        n_configs=args.configs,
        max_fidelity=args.fidelities,
        n_objectives=args.objectives,
        n_tasks=args.tasks,
        correlation=args.correlation,
        planted=planted,
        tradeoff=args.tradeoff,
        name=args.name,
    )
    rng = SeededRng(args.seed)
    suite = benchio.generate_synthetic(spec, rng.child("benchmark"))
    args.out.mkdir(parents=True, exist_ok=True)
    benchio.save_benchmark(suite.target, args.out / "benchmark.jsonl")
    benchio.save_corpus(suite.corpus, args.out / "corpus.jsonl")
    written = ["benchmark.jsonl", "corpus.jsonl"]
    if args.hardware:
        model = benchio.synthetic_cloud_hardware(args.hardware, rng.child("hardware"))
        benchio.save_hardware_model(model, args.out / "hardware.jsonl")
        written.append("hardware.jsonl")
    print(f"wrote {', '.join(str(args.out / w) for w in written)}")
    return 0


def cmd_expand(args) -> int:
    base = benchio.load_benchmark(args.benchmark)
    if args.mode == "cloud":
        if args.hardware is None:
            raise benchio.ContractError("cloud expansion needs --hardware")
        model = benchio.load_hardware_model(args.hardware)
        model.reference_hardware()
        table = benchio.expand_cloud(base, model)
        corpus_fn = lambda c: benchio.expand_corpus_cloud(c, model)
    else:
        if args.latency is None:
            raise benchio.ContractError("edge expansion needs --latency")
        model = benchio.load_hardware_model(args.hardware) if args.hardware else benchio.HardwareCostModel.edge()
        lat = benchio.load_latency_table(args.latency)
        table = benchio.expand_edge(base, lat, model)
        corpus_fn = lambda c: benchio.expand_corpus(c, model.hardware, lambda i, h: lat.ratio(i, h.name))
    benchio.save_benchmark(table, args.out)
    print(f"wrote {args.out} ({table.n_configs} configs)")
    if args.corpus is not None:
        out = args.corpus_out or args.out.with_name(args.out.stem + "-corpus.jsonl")
        benchio.save_corpus(corpus_fn(benchio.load_corpus(args.corpus)), out)
        print(f"wrote {out}")
    return 0


def cmd_run(args) -> int:
    bench = benchio.load_benchmark(args.benchmark)
    corpus = benchio.load_corpus(args.corpus) if args.corpus else None
    result = run_study(
        bench,
        corpus,
        args.methods,
        args.seeds,
        args.R,
        args.eta,
        rho=args.rho,
        sigma_floor=args.sigma_floor,
        workers=args.workers,
    )
    args.out.mkdir(parents=True, exist_ok=True)
    export_table(result, args.out / "table.txt")
    export_convergence(result, args.out / "curves.csv", bench.error_index or 0)
    with open(args.out / "runs.csv", "w", encoding="utf-8") as fh:
        fh.write("method,seed,final_error,total_runtime_s,total_cost_usd,evaluations\n")
        for r in result.runs:
            fh.write(f"{r.method},{r.seed},{r.final_error!r},{r.total_runtime!r},{r.total_cost!r},{r.n_evaluations}\n")
    sys.stdout.write((args.out / "table.txt").read_text())
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    if args.command == "run":
        if args.config is not None:
            args = _apply_config_file(parser, args, argv)
        if args.benchmark is None:
            parser.error("run needs --benchmark (flag or config file)")
        if args.eta < 2:
            parser.error("--eta must be >= 2")
        if any(method(m).needs_corpus for m in args.methods) and args.corpus is None:
            parser.error("transfer methods (HB+tr, HB+ND+tr) need --corpus")
    if args.command == "gen" and args.hardware < 0:
        parser.error("--hardware must be >= 0")
    handlers = {"gen": cmd_gen, "expand": cmd_expand, "run": cmd_run}
    try:
        return handlers[args.command](args)
    except (ValueError, KeyError, OSError) as exc:
        print(f"mohb: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
