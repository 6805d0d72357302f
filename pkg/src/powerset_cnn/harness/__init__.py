from .bench import RATIO_BAND, bench_transforms, doubling_ok, time_transform
from .config import TASKS, ConfigError, ExperimentConfig, build_task
from .results import CSV_HEADER, emit_results, format_accuracy, load_results
from .train import RunResult, TrainingDiverged, accuracy, run_experiment, train_model

__all__ = [
    "CSV_HEADER", "ConfigError", "ExperimentConfig", "RATIO_BAND", "RunResult", "TASKS",
    "TrainingDiverged", "accuracy", "bench_transforms", "build_task", "doubling_ok",
    "emit_results", "format_accuracy", "load_results", "run_experiment", "time_transform",
    "train_model",
]
