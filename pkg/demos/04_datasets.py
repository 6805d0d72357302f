"""The synthetic classification tasks, generated small and checked."""
import numpy as np

from powerset_cnn.datasets import (gen_kjunta, gen_spectral_patterns, gen_submod, is_kjunta,
                                   is_submodular)

patterns = gen_spectral_patterns(seed=0, per_class=20, n=6)
print("spectral patterns:", patterns.X.shape, "classes", patterns.n_classes,
      "train/test", len(patterns.train_idx), len(patterns.test_idx))

juntas = gen_kjunta(seed=0, per_class=20, n=8)
k = juntas.extras["k"]
ok = all(is_kjunta(x, int(kx)) for x, kx in zip(juntas.X, k))
print("k-juntas: classes", juntas.n_classes, "every sample depends on at most k elements:", ok)

submod = gen_submod(seed=0, per_class=20, n=8)
flags = np.array([is_submodular(x) for x in submod.X])
for label, name in ((0, "coverage"), (1, "perturbed")):
    share = flags[submod.labels == label].mean()
    print(f"submodularity, {name}: {share:.0%} submodular")
