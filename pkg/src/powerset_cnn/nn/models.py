"""The model zoo: MLP baseline, hypercube GCNs and powerset CNNs."""
from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from ..core import ShiftModel
from .layers import Accumulate, Dense, Flatten, Layer, PowersetPool, ReLU, SpectralConv

MODEL_TAGS = (
    "MLP",
    "L-GCN", "L-GCN pool", "L-GCN pool avg",
    "A-GCN", "A-GCN pool", "A-GCN pool avg",
    "*-PCN", "*-PCN pool", "*-PCN pool avg",
    "◇-PCN", "◇-PCN pool", "◇-PCN pool avg",
)

_FAMILIES = {
    "mlp": "MLP", "l-gcn": "L-GCN", "a-gcn": "A-GCN",
    "*-pcn": "*-PCN", "absorb-pcn": "*-PCN", "star-pcn": "*-PCN",
    "◇-pcn": "◇-PCN", "⋄-pcn": "◇-PCN", "<>-pcn": "◇-PCN", "diamond-pcn": "◇-PCN",
    "union-pcn": "◇-PCN",
}


def canonical_tag(tag: str) -> str:
    """Normalize spelling variants ('diamond-pcn pool avg.', 'A-GCN_pool') to a zoo tag."""
    words = re.split(r"[\s_]+", tag.strip().lower().rstrip("."))
    words = [w.rstrip(".") for w in words if w]
    if not words or words[0] not in _FAMILIES:
        raise ValueError(f"unknown model tag {tag!r}; choose from {', '.join(MODEL_TAGS)}")
    family = _FAMILIES[words[0]]
    rest = words[1:]
    if family == "MLP" and rest:
        raise ValueError(f"unknown model tag {tag!r}")
    if rest not in ([], ["pool"], ["pool", "avg"]):
        raise ValueError(f"unknown model tag {tag!r}")
    return " ".join([family] + rest)


@dataclass
class ModelConfig:
    tag: str
    n_classes: int
    width: int = 32
    hidden: int = 512
    mlp_hidden: int = 4096
    n_conv: int = 3

    def __post_init__(self):
        self.tag = canonical_tag(self.tag)

    @property
    def family(self) -> str:
        return self.tag.split()[0]

    @property
    def pool(self) -> bool:
        return "pool" in self.tag

    @property
    def accumulate(self) -> bool:
        return self.tag.endswith("avg")


class Model:
    """A feed-forward stack; inputs are (batch, 2**n) or (batch, 2**n, channels)."""

    def __init__(self, config: ModelConfig, n: int, layers: list[Layer], signal_input: bool):
        self.config = config
        self.n = n
        self.layers = layers
        self.signal_input = signal_input
        if layers:
            layers[0].input_grad = False

    def forward(self, X):
        X = np.asarray(X)
        if X.ndim == 2:
            X = X[:, :, None]
        if X.shape[1] != 1 << self.n:
            raise ValueError(f"expected 2**{self.n} subsets, got {X.shape[1]}")
        dtype = self.dtype
        if self.signal_input:
            h = np.ascontiguousarray(X.transpose(1, 0, 2), dtype=dtype)
        else:
            h = np.ascontiguousarray(X.reshape(X.shape[0], -1), dtype=dtype)
        for layer in self.layers:
            h = layer.forward(h)
        return h

    __call__ = forward

    def backward(self, dlogits):
        """Accumulate parameter gradients; the input gradient is not computed."""
        g = dlogits
        for layer in reversed(self.layers):
            g = layer.backward(g)

    def zero_grad(self):
        for layer in self.layers:
            layer.zero_grad()

    def named_parameters(self):
        for i, layer in enumerate(self.layers):
            for name, p in layer.params.items():
                yield f"{i}.{type(layer).__name__}.{name}", p, layer.grads[name]

    def n_params(self) -> int:
        return sum(layer.n_params() for layer in self.layers)

    @property
    def dtype(self):
        for _, p, _ in self.named_parameters():
            return p.dtype
        return np.float32

    def predict(self, X, batch_size=256):
        out = [np.argmax(self.forward(X[i:i + batch_size]), axis=1)
               for i in range(0, len(X), batch_size)]
        return np.concatenate(out) if out else np.zeros(0, dtype=np.int64)

    def head_input_size(self) -> int:
        for layer in self.layers:
            if isinstance(layer, Dense):
                return layer.params["weight"].shape[0]
        raise ValueError("model has no dense layer")


def build_model(config: ModelConfig | str, n: int, n_classes: int | None = None,
                rng=None, dtype=np.float32, in_channels: int = 1) -> Model:
    """Assemble one row of the model zoo for signals on a ground set of size n."""
    if isinstance(config, str):
        if n_classes is None:
            raise ValueError("n_classes is required when building from a tag")
        config = ModelConfig(config, n_classes)
    rng = np.random.default_rng() if rng is None else rng
    k = config.n_classes
    layers: list[Layer] = []
    if config.family == "MLP":
        d = (1 << n) * in_channels
        h = config.mlp_hidden
        layers = [Dense(d, h, rng, dtype), ReLU(), Dense(h, h, rng, dtype), ReLU(),
                  Dense(h, k, rng, dtype)]
        return Model(config, n, layers, signal_input=False)

    kind, model = {
        "L-GCN": ("l_gcn", ShiftModel.SYMDIFF),
        "A-GCN": ("a_gcn", ShiftModel.SYMDIFF),
        "*-PCN": ("pcn", ShiftModel.ABSORB),
        "◇-PCN": ("pcn", ShiftModel.UNION),
    }[config.family]
    cur, ch = n, in_channels
    for _ in range(config.n_conv):
        layers.append(SpectralConv(cur, ch, config.width, kind, model, rng=rng, dtype=dtype))
        ch = config.width
        if config.pool:
            layers.append(PowersetPool(cur))
            cur -= 1
    if config.accumulate:
        layers.append(Accumulate())
        features = ch
    else:
        layers.append(Flatten())
        features = (1 << cur) * ch
    layers += [Dense(features, config.hidden, rng, dtype), ReLU(),
               Dense(config.hidden, k, rng, dtype)]
    return Model(config, n, layers, signal_input=True)
