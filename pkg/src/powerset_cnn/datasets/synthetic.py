"""Synthetic set-function classification tasks and their verification oracles."""
from __future__ import annotations

import numpy as np

from ..core import ShiftModel
from ..transforms import TransformKind, apply_transform
from .base import LabeledDataset, random_split


class GenerationError(RuntimeError):
    pass


N_DEFAULT = 10
PER_CLASS_DEFAULT = 10_000


# ---------------------------------------------------------------- spectral patterns

def pattern_supports(rng, n=N_DEFAULT, p=0.5):
    """Boolean Fourier supports of the four pattern classes.

    Classes one and two each keep every frequency independently with
    probability ``p``; class three uses all frequencies; class four keeps the
    frequencies that are in both or in neither of the first two supports.
    """
    size = 1 << n
    s1 = rng.random(size) < p
    s2 = rng.random(size) < p
    s3 = np.ones(size, dtype=bool)
    s4 = (s1 & s2) | ~(s1 | s2)
    return np.stack([s1, s2, s3, s4])


def gen_spectral_patterns(seed, per_class=PER_CLASS_DEFAULT, n=N_DEFAULT, p=0.5,
                          split=0.8) -> LabeledDataset:
    rng = np.random.default_rng(seed)
    supports = pattern_supports(rng, n, p)
    k = supports.shape[0]
    labels = np.repeat(np.arange(k), per_class)
    spectra = rng.standard_normal((k * per_class, 1 << n)) * supports[labels]
    # On a 2**-20 grid every partial sum of the transforms is exact in float64,
    # so the samples' spectra vanish off the class support without rounding.
    spectra = np.round(spectra * 2.0 ** 20) / 2.0 ** 20
    # the absorbing transform is an involution, so F^-1 = F
    X = apply_transform(spectra, TransformKind.SIGNAL_INVERSE, ShiftModel.ABSORB, axis=1)
    params = {"task": "patterns", "n": n, "per_class": per_class, "p": p, "seed": seed}
    ds = LabeledDataset(X, labels, k, *random_split(len(labels), split, rng), params=params)
    ds.extras["supports"] = supports
    return ds


# ---------------------------------------------------------------- k-juntas

def absorb_singletons(values: np.ndarray, elements) -> np.ndarray:
    """Apply the absorbing shift by each singleton {x_i}, i in ``elements`` (0-based)."""
    out = values
    idx = np.arange(values.shape[-1])
    for i in elements:
        out = out[..., idx & ~(1 << int(i))]
    return out


def random_kjunta(rng, k, n=N_DEFAULT):
    """Random values on all subsets, then n - k shifts by distinct random singletons."""
    values = rng.standard_normal(1 << n)
    eliminated = rng.choice(n, size=n - k, replace=False)
    return absorb_singletons(values, eliminated), eliminated


def relevant_elements(s, tol=0.0) -> list:
    """0-based elements x with s_A != s_{A \\ {x}} for some A."""
    s = np.asarray(s, dtype=np.float64)
    n = s.shape[0].bit_length() - 1
    idx = np.arange(1 << n)
    out = []
    for i in range(n):
        if np.any(np.abs(s - s[idx & ~(1 << i)]) > tol):
            out.append(i)
    return out


def is_kjunta(s, k, tol=0.0) -> bool:
    """Whether ``s`` depends on the membership of at most ``k`` elements.

    The elements ``s`` does not depend on are exactly those x with
    ``s_A = s_{A \\ {x}}`` for all A; the rest form the smallest junta set.
    """
    n = np.asarray(s).shape[0].bit_length() - 1
    if n > 12:
        raise ValueError("brute-force junta check is limited to n <= 12")
    return len(relevant_elements(s, tol)) <= k


def gen_kjunta(seed, per_class=PER_CLASS_DEFAULT, n=N_DEFAULT, ks=(3, 4, 5, 6, 7),
               split=0.8) -> LabeledDataset:
    rng = np.random.default_rng(seed)
    X = np.empty((len(ks) * per_class, 1 << n))
    labels = np.repeat(np.arange(len(ks)), per_class)
    for row, label in enumerate(labels):
        X[row], _ = random_kjunta(rng, ks[label], n)
    params = {"task": "kjunta", "n": n, "per_class": per_class, "ks": list(ks), "seed": seed}
    ds = LabeledDataset(X, labels, len(ks), *random_split(len(labels), split, rng), params=params)
    ds.extras["k"] = np.asarray(ks)[labels]
    return ds


# ---------------------------------------------------------------- submodularity

def subset_unions(masks: np.ndarray) -> np.ndarray:
    """``out[A] = OR of masks[i] for i in A`` over all subsets (rows are boolean vectors)."""
    n, u = masks.shape
    out = np.zeros((1, u), dtype=bool)
    for i in range(n):
        out = np.concatenate([out, out | masks[i]])
    return out


def gen_coverage(rng, n=N_DEFAULT, universe=50, p_cover=0.3) -> np.ndarray:
    """Weighted coverage function ``s_A = w(union of C_i, i in A)``.

    Each element covers every universe point with probability ``p_cover``;
    point weights are uniform on (0, 1).
    """
    cover = rng.random((n, universe)) < p_cover
    weights = rng.random(universe)
    return subset_unions(cover).astype(np.float64) @ weights


def is_submodular(s, tol=1e-9) -> bool:
    """Check ``s_{A+x} + s_{A+y} >= s_{A+x+y} + s_A`` for all A and x, y outside A.

    This pairwise condition is equivalent to diminishing returns over all
    A inside B. ``tol`` absorbs floating-point rounding in the sums.
    """
    s = np.asarray(s, dtype=np.float64)
    n = s.shape[0].bit_length() - 1
    idx = np.arange(1 << n)
    scale = max(1.0, float(np.abs(s).max()))
    for x in range(n):
        for y in range(x + 1, n):
            bx, by = 1 << x, 1 << y
            A = idx[(idx & (bx | by)) == 0]
            gap = s[A | bx] + s[A | by] - s[A | bx | by] - s[A]
            if np.any(gap < -tol * scale):
                return False
    return True


def perturb_coverage(s, rng, eps=0.05, max_tries=100) -> np.ndarray:
    """Add uniform(0, eps * range(s)) noise, redrawing until submodularity breaks."""
    s = np.asarray(s, dtype=np.float64)
    spread = float(s.max() - s.min())
    for _ in range(max_tries):
        t = s + rng.uniform(0.0, eps * spread, size=s.shape)
        if not is_submodular(t):
            return t
    raise GenerationError(f"perturbation kept the function submodular after {max_tries} tries")


def gen_submod(seed, per_class=PER_CLASS_DEFAULT, n=N_DEFAULT, universe=50, p_cover=0.3,
               eps=0.05, split=0.8) -> LabeledDataset:
    """Class 0: coverage functions. Class 1: perturbed coverage functions."""
    rng = np.random.default_rng(seed)
    X = np.empty((2 * per_class, 1 << n))
    for i in range(per_class):
        X[i] = gen_coverage(rng, n, universe, p_cover)
    for i in range(per_class):
        X[per_class + i] = perturb_coverage(gen_coverage(rng, n, universe, p_cover), rng, eps)
    labels = np.repeat([0, 1], per_class)
    params = {"task": "submod", "n": n, "per_class": per_class, "universe": universe,
              "p_cover": p_cover, "eps": eps, "seed": seed}
    return LabeledDataset(X, labels, 2, *random_split(len(labels), split, rng), params=params)
