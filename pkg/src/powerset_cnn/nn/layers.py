"""Layers with hand-written backward passes.

Signal tensors inside the convolutional stack are laid out subset-major,
``(2**n, batch, channels)``, so that transforms act on the leading axis and
the per-frequency channel mixing is a stacked matrix product. Dense layers
work on ``(batch, features)``.
"""
from __future__ import annotations

import numpy as np

from ..core import ShiftModel, cardinalities
from ..filtering import pool_indices
from ..transforms import TransformKind, apply_transform, response_basis


class Layer:
    """Base class: ``forward`` caches what ``backward`` needs."""

    def __init__(self):
        self.params: dict[str, np.ndarray] = {}
        self.grads: dict[str, np.ndarray] = {}
        self._cache = None
        # the first layer of a model can skip computing d(loss)/d(input)
        self.input_grad = True

    def forward(self, x):
        raise NotImplementedError

    def backward(self, dy):
        raise NotImplementedError

    def zero_grad(self):
        for k, v in self.params.items():
            g = self.grads.get(k)
            if g is None or g.shape != v.shape or g.dtype != v.dtype:
                self.grads[k] = np.zeros_like(v)
            else:
                g.fill(0)

    def n_params(self) -> int:
        return int(sum(v.size for v in self.params.values()))

    def _need_cache(self):
        if self._cache is None:
            raise RuntimeError(f"{type(self).__name__}.backward called before forward")
        return self._cache


def glorot_uniform(rng, shape, fan_in, fan_out, dtype):
    limit = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-limit, limit, size=shape).astype(dtype)


def one_hop_support(n: int) -> tuple:
    return (0,) + tuple(1 << i for i in range(n))


def conv_basis(kind: str, n: int, model: ShiftModel | None = None) -> tuple[ShiftModel, np.ndarray]:
    """Shift model and coefficient-to-frequency-response matrix for a conv kind.

    ``pcn``:   one-hop powerset filter, coefficients (h_{}, h_{x_1}, ..., h_{x_n}).
    ``a_gcn``: theta0 I + theta1 A on the hypercube; A has response n - 2|B|
               under the Walsh-Hadamard transform.
    ``l_gcn``: theta (2I - L) with L = I - A/n, i.e. theta (I + A/n).
    """
    if kind == "pcn":
        model = ShiftModel.parse(model or ShiftModel.ABSORB)
        return model, np.array(response_basis(n, model, one_hop_support(n)))
    adj = (n - 2 * cardinalities(n)).astype(np.float64)
    if kind == "a_gcn":
        return ShiftModel.SYMDIFF, np.column_stack([np.ones(1 << n), adj])
    if kind == "l_gcn":
        return ShiftModel.SYMDIFF, (1.0 + adj / max(n, 1))[:, None]
    raise ValueError(f"unknown convolution kind {kind!r}")


class SpectralConv(Layer):
    """Multi-channel convolution computed in the Fourier domain.

    ``t_j = relu(sum_i h_ij * s_i + b_j)``, where each filter ``h_ij`` is
    parameterized by a coefficient vector whose frequency response is
    ``basis @ coeffs``. All hypercube graph layers are special cases with
    tied coefficients under the symmetric-difference transform.
    """

    def __init__(self, n, in_channels, out_channels, kind="pcn", model=None,
                 activation=True, rng=None, dtype=np.float32):
        super().__init__()
        rng = np.random.default_rng() if rng is None else rng
        self.n = n
        self.in_channels = in_channels
        self.out_channels = out_channels
        self.kind = kind
        self.model, basis = conv_basis(kind, n, model)
        self.basis = basis.astype(dtype)
        self.activation = activation
        k = basis.shape[1]
        # fans count the filter's support in the powerset (n + 1 subsets for every
        # kind), not its free coefficients; the tied graph filters would otherwise
        # start with activations growing by roughly sqrt(n) per layer
        support = n + 1
        self.params["weight"] = glorot_uniform(rng, (in_channels, out_channels, k),
                                               in_channels * support, out_channels * support,
                                               dtype)
        self.params["bias"] = np.zeros(out_channels, dtype=dtype)
        self.zero_grad()

    def responses(self) -> np.ndarray:
        """Frequency responses of the filter bank, shape (2**n, in, out)."""
        return np.tensordot(self.basis, self.params["weight"], axes=([1], [2]))

    def forward(self, x):
        if x.ndim != 3 or x.shape[0] != 1 << self.n or x.shape[2] != self.in_channels:
            raise ValueError(f"expected input of shape (2**{self.n}, batch, {self.in_channels}), "
                             f"got {x.shape}")
        xf = apply_transform(x, TransformKind.SIGNAL_FORWARD, self.model)
        H = self.responses()
        z = apply_transform(np.matmul(xf, H), TransformKind.SIGNAL_INVERSE, self.model)
        z += self.params["bias"]
        self._cache = (xf, H, z)
        return np.maximum(z, 0) if self.activation else z

    def backward(self, dy):
        xf, H, z = self._need_cache()
        dz = dy * (z > 0) if self.activation else dy
        self.grads["bias"] += dz.sum(axis=(0, 1))
        dzf = apply_transform(dz, TransformKind.SIGNAL_INVERSE, self.model, transpose=True)
        dH = np.matmul(xf.transpose(0, 2, 1), dzf)
        self.grads["weight"] += np.tensordot(dH, self.basis, axes=([0], [0]))
        if not self.input_grad:
            return None
        dxf = np.matmul(dzf, H.transpose(0, 2, 1))
        return apply_transform(dxf, TransformKind.SIGNAL_FORWARD, self.model, transpose=True)

    def filter_coefficients(self, i, j) -> np.ndarray:
        """Full set function of filter (i, j) for ``pcn`` layers."""
        if self.kind != "pcn":
            raise ValueError("explicit filters are only stored for powerset conv layers")
        h = np.zeros(1 << self.n)
        h[list(one_hop_support(self.n))] = self.params["weight"][i, j]
        return h


class PowersetPool(Layer):
    """Merge two ground-set elements (x_1 and x_2 by default) in every channel."""

    def __init__(self, n, merge=0b11):
        super().__init__()
        if n < 2:
            raise ValueError("pooling needs at least two ground set elements")
        self.n = n
        self.index = pool_indices(n, merge)
        self.n_out = n - bin(merge).count("1") + 1

    def forward(self, x):
        self._cache = x.shape
        return x[self.index]

    def backward(self, dy):
        shape = self._need_cache()
        dx = np.zeros(shape, dtype=dy.dtype)
        dx[self.index] = dy
        return dx


class Accumulate(Layer):
    """Average each channel over all subsets: (2**n, batch, ch) -> (batch, ch)."""

    def forward(self, x):
        self._cache = x.shape
        return x.mean(axis=0)

    def backward(self, dy):
        shape = self._need_cache()
        return np.broadcast_to(dy / shape[0], shape).astype(dy.dtype)


class Flatten(Layer):
    """(2**n, batch, ch) -> (batch, 2**n * ch)."""

    def forward(self, x):
        self._cache = x.shape
        return np.ascontiguousarray(x.transpose(1, 0, 2)).reshape(x.shape[1], -1)

    def backward(self, dy):
        S, b, c = self._need_cache()
        return np.ascontiguousarray(dy.reshape(b, S, c).transpose(1, 0, 2))


class Dense(Layer):
    def __init__(self, n_in, n_out, rng=None, dtype=np.float32):
        super().__init__()
        rng = np.random.default_rng() if rng is None else rng
        self.params["weight"] = glorot_uniform(rng, (n_in, n_out), n_in, n_out, dtype)
        self.params["bias"] = np.zeros(n_out, dtype=dtype)
        self.zero_grad()

    def forward(self, x):
        if x.ndim != 2 or x.shape[1] != self.params["weight"].shape[0]:
            raise ValueError(f"expected (batch, {self.params['weight'].shape[0]}) input, got {x.shape}")
        self._cache = x
        return x @ self.params["weight"] + self.params["bias"]

    def backward(self, dy):
        x = self._need_cache()
        self.grads["weight"] += x.T @ dy
        self.grads["bias"] += dy.sum(axis=0)
        if not self.input_grad:
            return None
        return dy @ self.params["weight"].T


class ReLU(Layer):
    def forward(self, x):
        self._cache = x > 0
        # np.maximum keeps NaN visible, so a diverged run shows up in the loss
        return np.maximum(x, 0)

    def backward(self, dy):
        return dy * self._need_cache()


def relu(x):
    return np.maximum(x, 0)


def softmax_cross_entropy(logits, labels):
    """Mean cross entropy over the batch and its gradient w.r.t. the logits."""
    logits = np.asarray(logits)
    labels = np.asarray(labels)
    if logits.ndim != 2 or labels.shape != (logits.shape[0],):
        raise ValueError(f"shape mismatch: logits {logits.shape}, labels {labels.shape}")
    k = logits.shape[1]
    if labels.size and (labels.min() < 0 or labels.max() >= k):
        raise ValueError(f"labels must lie in [0, {k})")
    shifted = logits - logits.max(axis=1, keepdims=True)
    logsum = np.log(np.exp(shifted).sum(axis=1))
    rows = np.arange(logits.shape[0])
    loss = float(np.mean(logsum - shifted[rows, labels]))
    probs = np.exp(shifted - logsum[:, None])
    probs[rows, labels] -= 1.0
    return loss, (probs / logits.shape[0]).astype(logits.dtype)
