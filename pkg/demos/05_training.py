"""Train a powerset CNN and an MLP on the k-junta task and compare.

A small slice of the data keeps this to a few minutes on one core.
"""
import logging

from powerset_cnn.harness import ExperimentConfig, format_accuracy, run_experiment
from powerset_cnn.nn import build_model

logging.basicConfig(level=logging.INFO, format="%(message)s")

for tag in ("*-PCN pool avg", "MLP"):
    print(tag, "parameters:", build_model(tag, 10, 5).n_params())

for tag in ("*-PCN pool avg", "MLP"):
    cfg = ExperimentConfig(task="kjunta", model=tag, epochs=12, repeats=1, scale=0.1, seed=3)
    result = run_experiment(cfg)
    print(f"{tag:16s} test accuracy {format_accuracy(result.mean, result.std)} "
          f"({result.wall_time:.0f} s)")
