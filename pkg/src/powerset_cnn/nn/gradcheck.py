"""Central finite-difference checks for the hand-written backward passes."""
import numpy as np


def _rel_error(analytic, numeric):
    # scale-relative: elementwise ratios are meaningless where the gradient is ~0
    scale = max(np.abs(analytic).max(), np.abs(numeric).max(), 1e-300)
    return float(np.abs(analytic - numeric).max() / scale)


def numeric_gradient(f, x, eps=1e-4):
    """Central differences of the scalar function ``f`` at array ``x`` (perturbed in place)."""
    grad = np.zeros_like(x, dtype=np.float64)
    flat = x.reshape(-1)
    g = grad.reshape(-1)
    for i in range(flat.size):
        old = flat[i]
        flat[i] = old + eps
        fp = f()
        flat[i] = old - eps
        fm = f()
        flat[i] = old
        g[i] = (fp - fm) / (2 * eps)
    return grad


def check_layer(layer, x, rng, eps=1e-4):
    """Max relative error of a layer's input and parameter gradients.

    The scalar objective is ``sum(layer(x) * R)`` with a fixed random ``R``.
    Returns a dict ``{"input": err, "<param>": err, ...}``.
    """
    y = layer.forward(x)
    R = rng.standard_normal(y.shape)

    def objective():
        return float(np.sum(layer.forward(x) * R))

    layer.forward(x)
    layer.zero_grad()
    dx = layer.backward(R.astype(y.dtype))
    errors = {"input": _rel_error(dx, numeric_gradient(objective, x, eps))}
    for name, p in layer.params.items():
        errors[name] = _rel_error(layer.grads[name], numeric_gradient(objective, p, eps))
    return errors


def check_loss(loss_fn, logits, labels, eps=1e-4):
    _, grad = loss_fn(logits, labels)
    numeric = numeric_gradient(lambda: loss_fn(logits, labels)[0], logits, eps)
    return _rel_error(grad, numeric)


def check_model(model, X, labels, loss_fn, eps=1e-4, max_entries=None, rng=None):
    """Relative error of every parameter gradient of a full model.

    With ``max_entries`` set, only a random subset of each parameter's entries
    is perturbed, which keeps the check cheap on wide dense layers.
    """
    rng = np.random.default_rng(0) if rng is None else rng
    model.zero_grad()
    _, d = loss_fn(model.forward(X), labels)
    model.backward(d)
    errors = {}
    for name, p, g in model.named_parameters():
        flat = p.reshape(-1)
        idx = np.arange(flat.size)
        if max_entries is not None and flat.size > max_entries:
            idx = rng.choice(flat.size, max_entries, replace=False)
        num = np.zeros(idx.size)
        for j, i in enumerate(idx):
            old = flat[i]
            flat[i] = old + eps
            fp = loss_fn(model.forward(X), labels)[0]
            flat[i] = old - eps
            fm = loss_fn(model.forward(X), labels)[0]
            flat[i] = old
            num[j] = (fp - fm) / (2 * eps)
        errors[name] = _rel_error(g.reshape(-1)[idx], num)
    return errors
