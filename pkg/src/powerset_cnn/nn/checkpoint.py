"""Model checkpoints as flat ``name -> float64 array`` archives (numpy ``.npz``)."""
import numpy as np


def save_checkpoint(model, path):
    arrays = {name: np.asarray(p, dtype=np.float64) for name, p, _ in model.named_parameters()}
    with open(path, "wb") as fh:
        np.savez(fh, **arrays)


def load_checkpoint(model, path):
    with np.load(path) as data:
        names = {name for name, _, _ in model.named_parameters()}
        if set(data.files) != names:
            missing = sorted(names - set(data.files))
            extra = sorted(set(data.files) - names)
            raise ValueError(f"checkpoint does not match model (missing {missing}, extra {extra})")
        for name, p, _ in model.named_parameters():
            value = data[name]
            if value.shape != p.shape:
                raise ValueError(f"{name}: checkpoint shape {value.shape} != model shape {p.shape}")
            p[...] = value
    return model
