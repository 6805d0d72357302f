"""Training loop and repeated seeded runs."""
from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass, field

import numpy as np

from ..datasets import LabeledDataset
from ..nn import Adam, Model, build_model, lr_schedule, softmax_cross_entropy
from .config import ExperimentConfig, build_task, repeat_seed

log = logging.getLogger(__name__)


@dataclass
class RunResult:
    task: str
    model: str
    seed: int
    accuracies: list
    failed: list = field(default_factory=list)
    wall_time: float = 0.0
    loss_curves: list = field(default_factory=list)
    test_curves: list = field(default_factory=list)
    config: dict = field(default_factory=dict)
    config_hash: str = ""
    split_hash: str = ""

    @property
    def repeats(self) -> int:
        return len(self.accuracies)

    def _ok(self):
        return np.array([a for a, bad in zip(self.accuracies, self._failed_mask()) if not bad])

    def _failed_mask(self):
        return [i in self.failed for i in range(len(self.accuracies))]

    @property
    def mean(self) -> float:
        ok = self._ok()
        return float(ok.mean()) if ok.size else math.nan

    @property
    def std(self) -> float:
        ok = self._ok()
        return float(ok.std()) if ok.size else math.nan

    @property
    def final_loss_curve(self) -> list:
        return self.loss_curves[-1] if self.loss_curves else []

    def to_dict(self) -> dict:
        return {"task": self.task, "model": self.model, "seed": self.seed,
                "accuracies": list(self.accuracies), "failed": list(self.failed),
                "wall_time": self.wall_time, "loss_curves": self.loss_curves,
                "test_curves": self.test_curves, "config": self.config,
                "config_hash": self.config_hash, "split_hash": self.split_hash,
                "mean": self.mean, "std": self.std}

    @classmethod
    def from_dict(cls, d: dict) -> "RunResult":
        d = {k: v for k, v in d.items() if k not in ("mean", "std")}
        return cls(**d)


class TrainingDiverged(ArithmeticError):
    pass


def accuracy(model: Model, X, y, batch_size=256) -> float:
    if len(y) == 0:
        return math.nan
    return float(np.mean(model.predict(X, batch_size) == y))


def train_model(model: Model, X, y, epochs, batch_size, rng, lr=1e-3, decay=0.95,
                evaluate=None, eval_every=0, on_epoch=None):
    """Minibatch Adam on cross entropy; returns (mean loss per epoch, [(epoch, test acc)]).

    Raises ``TrainingDiverged`` on a non-finite loss.
    """
    opt = Adam(lr)
    params = list(model.named_parameters())
    losses, evals = [], []
    for epoch in range(epochs):
        rate = lr_schedule(epoch, lr, decay)
        order = rng.permutation(len(y))
        total = 0.0
        for start in range(0, len(order), batch_size):
            idx = order[start:start + batch_size]
            model.zero_grad()
            loss, dlogits = softmax_cross_entropy(model.forward(X[idx]), y[idx])
            if not math.isfinite(loss):
                raise TrainingDiverged(f"non-finite loss in epoch {epoch}")
            model.backward(dlogits)
            opt.step(((k, p, g) for k, p, g in params), lr=rate)
            total += loss * len(idx)
        losses.append(total / len(y))
        if evaluate is not None and eval_every and (epoch + 1) % eval_every == 0:
            evals.append((epoch + 1, evaluate()))
        if on_epoch is not None:
            on_epoch(epoch, losses[-1])
    return losses, evals


def run_experiment(cfg: ExperimentConfig, dataset: LabeledDataset | None = None,
                   verbose=False) -> RunResult:
    """Train ``cfg.repeats`` fresh models on one dataset and report final test accuracy."""
    t0 = time.perf_counter()
    ds = build_task(cfg) if dataset is None else dataset
    dtype = np.dtype(cfg.dtype)
    X_train, y_train = ds.train()
    X_test, y_test = ds.test()
    X_train = X_train.astype(dtype)
    X_test = X_test.astype(dtype)
    result = RunResult(cfg.task, cfg.model, cfg.seed, [], config=cfg.to_dict(),
                       config_hash=cfg.config_hash(), split_hash=ds.split_hash())
    for r in range(cfg.repeats):
        rng = np.random.default_rng(repeat_seed(cfg.seed, r))
        model = build_model(cfg.model, ds.n, ds.n_classes, rng=rng, dtype=dtype,
                            in_channels=ds.channels)

        def report(epoch, loss, r=r):
            if verbose:
                log.info("%s %s repeat %d epoch %d loss %.4f", cfg.task, cfg.model, r, epoch, loss)

        try:
            losses, evals = train_model(model, X_train, y_train, cfg.epochs, cfg.batch_size, rng,
                                        cfg.lr, cfg.decay,
                                        evaluate=lambda: accuracy(model, X_test, y_test),
                                        eval_every=cfg.eval_every, on_epoch=report)
        except TrainingDiverged as exc:
            log.warning("repeat %d failed: %s", r, exc)
            result.failed.append(r)
            result.accuracies.append(math.nan)
            result.loss_curves.append([])
            result.test_curves.append([])
            continue
        acc = evals[-1][1] if evals and evals[-1][0] == cfg.epochs else accuracy(model, X_test, y_test)
        result.accuracies.append(acc)
        result.loss_curves.append(losses)
        result.test_curves.append(evals)
        if verbose:
            log.info("%s %s repeat %d accuracy %.4f", cfg.task, cfg.model, r, acc)
    result.wall_time = time.perf_counter() - t0
    return result
