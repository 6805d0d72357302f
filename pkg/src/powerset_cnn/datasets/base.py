"""Labeled set-function datasets, splitting and the binary export format."""
from __future__ import annotations

import hashlib
import json
import struct
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

MAGIC = b"PSDS"
_HEADER = struct.Struct("<4sIIII")


class DatasetFormatError(ValueError):
    pass


def random_split(count, train_fraction=0.8, rng=None):
    """One random partition of ``range(count)`` into sorted train and test indices."""
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must lie strictly between 0 and 1")
    rng = np.random.default_rng() if rng is None else rng
    perm = rng.permutation(count)
    cut = int(round(train_fraction * count))
    return np.sort(perm[:cut]), np.sort(perm[cut:])


@dataclass
class LabeledDataset:
    """Samples ``X[i]`` (values on all 2**n subsets, optionally with channels) and labels."""

    X: np.ndarray
    labels: np.ndarray
    n_classes: int
    train_idx: np.ndarray
    test_idx: np.ndarray
    params: dict = field(default_factory=dict)
    extras: dict = field(default_factory=dict)

    def __post_init__(self):
        self.X = np.asarray(self.X)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        self.train_idx = np.asarray(self.train_idx, dtype=np.int64)
        self.test_idx = np.asarray(self.test_idx, dtype=np.int64)
        if self.X.ndim not in (2, 3):
            raise ValueError(f"samples must be (count, 2**n[, channels]), got {self.X.shape}")
        size = self.X.shape[1]
        if size < 1 or size & (size - 1):
            raise ValueError(f"signal length {size} is not a power of two")
        if self.labels.shape != (len(self.X),):
            raise ValueError("one label per sample is required")
        if len(self.labels) and (self.labels.min() < 0 or self.labels.max() >= self.n_classes):
            raise ValueError("labels out of range")
        if np.intersect1d(self.train_idx, self.test_idx).size:
            raise ValueError("train and test indices overlap")

    @property
    def n(self) -> int:
        return self.X.shape[1].bit_length() - 1

    @property
    def channels(self) -> int:
        return 1 if self.X.ndim == 2 else self.X.shape[2]

    def __len__(self):
        return len(self.labels)

    def class_counts(self) -> np.ndarray:
        return np.bincount(self.labels, minlength=self.n_classes)

    def train(self):
        return self.X[self.train_idx], self.labels[self.train_idx]

    def test(self):
        return self.X[self.test_idx], self.labels[self.test_idx]

    def split_hash(self) -> str:
        """Digest of the train/test index sets, used to audit that they never mix."""
        h = hashlib.sha256()
        h.update(self.train_idx.tobytes())
        h.update(b"|")
        h.update(self.test_idx.tobytes())
        return h.hexdigest()[:16]

    def subsample(self, fraction, rng) -> "LabeledDataset":
        """Keep ``fraction`` of each class, chosen uniformly; the split is restricted accordingly."""
        if not 0.0 < fraction <= 1.0:
            raise ValueError("fraction must lie in (0, 1]")
        if fraction == 1.0:
            return self
        keep = []
        for c in range(self.n_classes):
            members = np.flatnonzero(self.labels == c)
            take = max(1, int(round(fraction * len(members)))) if len(members) else 0
            keep.append(rng.choice(members, size=take, replace=False))
        keep = np.sort(np.concatenate(keep))
        remap = np.full(len(self), -1)
        remap[keep] = np.arange(len(keep))
        tr = remap[self.train_idx]
        te = remap[self.test_idx]
        params = dict(self.params, subsample=fraction)
        return LabeledDataset(self.X[keep], self.labels[keep], self.n_classes,
                              tr[tr >= 0], te[te >= 0], params=params)


def save_dataset(ds: LabeledDataset, path) -> Path:
    """Write the binary container plus a JSON sidecar (``<path>.json``).

    Layout: magic ``PSDS``, then n, channels, sample count and class count
    as little-endian uint32, then float32 values (sample-major, subset, channel),
    then uint16 labels.
    """
    path = Path(path)
    if ds.n_classes > 0xFFFF:
        raise ValueError("too many classes for 16-bit labels")
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, ds.n, ds.channels, len(ds), ds.n_classes))
        fh.write(np.ascontiguousarray(ds.X, dtype="<f4").tobytes())
        fh.write(ds.labels.astype("<u2").tobytes())
    meta = {"params": ds.params, "train_idx": ds.train_idx.tolist(),
            "test_idx": ds.test_idx.tolist()}
    Path(str(path) + ".json").write_text(json.dumps(meta, indent=1))
    return path


def load_dataset(path) -> LabeledDataset:
    path = Path(path)
    raw = path.read_bytes()
    if len(raw) < _HEADER.size:
        raise DatasetFormatError(f"{path}: truncated header")
    magic, n, channels, count, n_classes = _HEADER.unpack_from(raw)
    if magic != MAGIC:
        raise DatasetFormatError(f"{path}: bad magic {magic!r}")
    n_values = count * (1 << n) * channels
    expected = _HEADER.size + 4 * n_values + 2 * count
    if len(raw) != expected:
        raise DatasetFormatError(f"{path}: expected {expected} bytes, found {len(raw)}")
    X = np.frombuffer(raw, dtype="<f4", count=n_values, offset=_HEADER.size)
    X = X.reshape((count, 1 << n, channels) if channels > 1 else (count, 1 << n))
    labels = np.frombuffer(raw, dtype="<u2", count=count, offset=_HEADER.size + 4 * n_values)
    sidecar = Path(str(path) + ".json")
    if sidecar.exists():
        meta = json.loads(sidecar.read_text())
        tr, te, params = meta["train_idx"], meta["test_idx"], meta.get("params", {})
    else:
        tr, te = random_split(count, 0.8, np.random.default_rng(0))
        params = {}
    return LabeledDataset(X.astype(np.float64), labels.astype(np.int64), n_classes, tr, te,
                          params=params)
