"""Experiment configuration and task construction."""
from __future__ import annotations

import dataclasses
import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from ..datasets import (LabeledDataset, build_coauth10, build_con10, build_dom, gen_kjunta,
                        gen_spectral_patterns, gen_submod, load_named)
from ..datasets.hypergraph import DOM4_CORPORA, DOM_CORPORA
from ..datasets.synthetic import PER_CLASS_DEFAULT
from ..nn.models import canonical_tag

TASKS = ("patterns", "kjunta", "submod", "dom4", "dom6", "con10", "coauth10")
SYNTHETIC = {"patterns": gen_spectral_patterns, "kjunta": gen_kjunta, "submod": gen_submod}


class ConfigError(ValueError):
    pass


@dataclass
class ExperimentConfig:
    task: str = "patterns"
    model: str = "*-PCN"
    epochs: int = 100
    batch_size: int = 128
    lr: float = 1e-3
    decay: float = 0.95
    repeats: int = 20
    seed: int = 0
    data_dir: str | None = None
    scale: float = 1.0
    out: str | None = None
    # evaluate on the test split every this many epochs; 0 means only after the last one
    eval_every: int = 0
    dtype: str = "float32"
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        self.task = str(self.task).lower()
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}; choose from {', '.join(TASKS)}")
        try:
            self.model = canonical_tag(self.model)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        for name in ("epochs", "batch_size", "repeats"):
            if int(getattr(self, name)) < 1:
                raise ConfigError(f"{name} must be positive")
            setattr(self, name, int(getattr(self, name)))
        if not 0.0 < self.scale <= 1.0:
            raise ConfigError("scale must lie in (0, 1]")
        if self.lr <= 0 or not 0 < self.decay <= 1:
            raise ConfigError("lr must be positive and decay in (0, 1]")
        if self.dtype not in ("float32", "float64"):
            raise ConfigError("dtype must be float32 or float64")

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ExperimentConfig":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_file(cls, path, **overrides) -> "ExperimentConfig":
        try:
            d = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        d.update({k: v for k, v in overrides.items() if v is not None})
        return cls.from_dict(d)

    def config_hash(self) -> str:
        """Digest of everything that influences results (not the output path)."""
        d = self.to_dict()
        d.pop("out", None)
        return hashlib.sha256(json.dumps(d, sort_keys=True).encode()).hexdigest()[:12]


def data_seed(seed):
    return [int(seed), 0]


def repeat_seed(seed, r):
    return [int(seed), 1, int(r)]


def build_task(cfg: ExperimentConfig) -> LabeledDataset:
    """Generate or load the dataset; the dataset seed does not depend on the repeat."""
    seed = data_seed(cfg.seed)
    if cfg.task in SYNTHETIC:
        # i.i.d. samples, so drawing fewer per class is the same as subsampling uniformly
        per_class = max(1, int(round(cfg.scale * PER_CLASS_DEFAULT)))
        ds = SYNTHETIC[cfg.task](seed, per_class=per_class, **cfg.extra)
        ds.params["seed"] = cfg.seed
        return ds
    if cfg.data_dir is None:
        raise ConfigError(f"task {cfg.task} needs --data-dir with the hypergraph corpora")
    if cfg.task in ("dom4", "dom6"):
        names = DOM4_CORPORA if cfg.task == "dom4" else DOM_CORPORA
        corpora = {name: load_named(cfg.data_dir, name) for name in names}
        ds = build_dom(corpora, cfg.task.upper(), seed=seed)
    elif cfg.task == "con10":
        ds = build_con10(load_named(cfg.data_dir, "congress-bills"), seed=seed)
    else:
        names = ("coauth-DBLP", "coauth-MAG-History", "coauth-MAG-Geology")
        ds = build_coauth10({name: load_named(cfg.data_dir, name) for name in names}, seed=seed)
    return ds.subsample(cfg.scale, np.random.default_rng([cfg.seed, 2]))
