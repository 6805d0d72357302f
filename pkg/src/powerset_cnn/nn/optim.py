import numba
import numpy as np


def lr_schedule(epoch, base_rate=1e-3, decay=0.95):
    """Exponential decay applied once per finished epoch."""
    return base_rate * decay ** epoch


@numba.njit(cache=True, fastmath=True, error_model="numpy")
def _adam_update(p, g, m, v, step, beta1, beta2, root_c2, eps):
    # step = lr / c1 and root_c2 = sqrt(c2), so the update is the usual
    # lr * m_hat / (sqrt(v_hat) + eps)
    one = p.dtype.type(1.0)
    for i in range(p.size):
        gi = g[i]
        mi = beta1 * m[i] + (one - beta1) * gi
        vi = beta2 * v[i] + (one - beta2) * gi * gi
        m[i] = mi
        v[i] = vi
        p[i] -= step * mi / (np.sqrt(vi) / root_c2 + eps)


class Adam:
    """Adam with bias-corrected moments; state is keyed by parameter name."""

    def __init__(self, lr=1e-3, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr = lr
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.state = {}

    def step(self, pairs, lr=None):
        """Update each ``param`` in place from its ``grad``; ``pairs`` yields (key, param, grad)."""
        lr = self.lr if lr is None else lr
        self.t += 1
        c1 = 1.0 - self.beta1 ** self.t
        c2 = 1.0 - self.beta2 ** self.t
        for key, p, g in pairs:
            if key not in self.state:
                self.state[key] = (np.zeros_like(p), np.zeros_like(p))
            m, v = self.state[key]
            if m.shape != p.shape:
                raise ValueError(f"optimizer state for {key} has shape {m.shape}, param {p.shape}")
            if not p.flags.c_contiguous:
                raise ValueError(f"parameter {key} must be contiguous")
            f = p.dtype.type
            _adam_update(p.reshape(-1), np.ascontiguousarray(g, dtype=p.dtype).reshape(-1),
                         m.reshape(-1), v.reshape(-1), f(lr / c1), f(self.beta1), f(self.beta2),
                         f(np.sqrt(c2)), f(self.eps))
