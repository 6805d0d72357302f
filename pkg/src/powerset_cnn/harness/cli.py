"""Command line entry point: ``run``, ``bench`` and ``gen``."""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from ..datasets import save_dataset
from ..datasets.base import DatasetFormatError
from ..datasets.hypergraph import CorpusParseError, CorruptCorpusError, MissingCorpusError
from ..datasets.synthetic import GenerationError
from .bench import bench_transforms, doubling_ok, format_table
from .config import ConfigError, ExperimentConfig, build_task
from .results import emit_results, format_accuracy
from .train import run_experiment

log = logging.getLogger("powerset_cnn")

# flag name -> config key
RUN_FLAGS = {"task": "task", "model": "model", "epochs": "epochs", "batch": "batch_size",
             "lr": "lr", "decay": "decay", "repeats": "repeats", "seed": "seed",
             "scale": "scale", "data_dir": "data_dir", "out": "out", "eval_every": "eval_every",
             "dtype": "dtype"}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="powerset-cnn",
                                description="Powerset convolution experiments on set functions.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="train and evaluate one (task, model) pair")
    run.add_argument("--config", help="JSON file with the same keys; flags override it")
    run.add_argument("--task")
    run.add_argument("--model")
    run.add_argument("--epochs", type=int)
    run.add_argument("--batch", type=int)
    run.add_argument("--lr", type=float)
    run.add_argument("--decay", type=float)
    run.add_argument("--repeats", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--scale", type=float)
    run.add_argument("--data-dir", dest="data_dir")
    run.add_argument("--out", help="result file; .csv or .json")
    run.add_argument("--eval-every", dest="eval_every", type=int)
    run.add_argument("--dtype", choices=("float32", "float64"))

    bench = sub.add_parser("bench", help="time the fast transforms")
    bench.add_argument("--n-min", type=int, default=10)
    bench.add_argument("--n-max", type=int, default=20)
    bench.add_argument("--models", default="absorb,union,symdiff",
                       help="comma separated shift models")
    bench.add_argument("--repeats", type=int, default=7)

    gen = sub.add_parser("gen", help="generate a dataset and export it")
    gen.add_argument("--task", required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--scale", type=float, default=1.0)
    gen.add_argument("--data-dir", dest="data_dir")
    gen.add_argument("--out", required=True)
    return p


def config_from_args(args) -> ExperimentConfig:
    overrides = {RUN_FLAGS[k]: v for k, v in vars(args).items() if k in RUN_FLAGS and v is not None}
    if args.config:
        return ExperimentConfig.from_file(args.config, **overrides)
    return ExperimentConfig.from_dict(overrides)


def cmd_run(args) -> int:
    cfg = config_from_args(args)
    result = run_experiment(cfg, verbose=args.verbose)
    print(f"{cfg.task} {cfg.model}: {format_accuracy(result.mean, result.std)} "
          f"over {result.repeats} repeats ({len(result.failed)} failed) "
          f"in {result.wall_time:.0f} s")
    if cfg.out:
        emit_results([result], cfg.out)
        print(f"wrote {cfg.out}")
    return 0


def cmd_bench(args) -> int:
    models = [m for m in args.models.split(",") if m]
    rows = bench_transforms(range(args.n_min, args.n_max + 1), models, args.repeats)
    print(format_table(rows))
    lo, hi = max(args.n_min, 14), min(args.n_max - 1, 19)
    if lo <= hi:
        ok = doubling_ok(rows, lo, hi)
        print(f"doubling ratio within [1.8, 2.6] for n in [{lo}, {hi}]: {'yes' if ok else 'no'}")
    return 0


def cmd_gen(args) -> int:
    cfg = ExperimentConfig(task=args.task, seed=args.seed, scale=args.scale,
                           data_dir=args.data_dir)
    ds = build_task(cfg)
    path = save_dataset(ds, args.out)
    print(f"wrote {len(ds)} samples ({ds.n_classes} classes) to {path}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(asctime)s %(message)s")
    handlers = {"run": cmd_run, "bench": cmd_bench, "gen": cmd_gen}
    try:
        return handlers[args.command](args)
    except (ConfigError, ValueError, OSError, GenerationError, DatasetFormatError,
            CorpusParseError, CorruptCorpusError, MissingCorpusError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
