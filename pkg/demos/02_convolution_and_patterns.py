"""Convolution, shift equivariance and the pattern a one-hop filter detects."""
import numpy as np

from powerset_cnn.core import SetFunction, ShiftModel, shift
from powerset_cnn.filtering import (convolve_direct, convolve_spectral, make_one_hop,
                                    matched_pattern)

rng = np.random.default_rng(1)
n = 4
s = SetFunction.from_values(rng.standard_normal(1 << n))
h = SetFunction.from_values(rng.standard_normal(1 << n))

for model in ShiftModel:
    direct = convolve_direct(h, s, model)
    fast = convolve_spectral(h, s, model)
    Q = 0b0101
    lhs = convolve_spectral(h, shift(s, Q, model), model)
    rhs = shift(fast, Q, model)
    print(f"{model.name:8s} direct == spectral: {direct.allclose(fast)}, "
          f"shift commutes: {lhs.allclose(rhs, rtol=1e-9, atol=1e-9)}")

# A one-hop filter only looks at the empty set and the singletons. Which unit
# signal makes its output at A as large as possible?
one_hop = make_one_hop(0.5, [1.0, -2.0, 0.3, 0.8])
A = 0b1011
p = matched_pattern(one_hop, A)
print("\nmatched pattern for A = {x1, x2, x4}:")
for bits in np.flatnonzero(p.values):
    print(f"  {bin(bits)[2:].zfill(n)[::-1]}: {p[bits]:+.3f}")
best = convolve_direct(one_hop, p).values[A]

trials = rng.standard_normal((2000, 1 << n))
trials /= np.linalg.norm(trials, axis=1, keepdims=True)
others = [convolve_direct(one_hop, SetFunction.from_values(u)).values[A] for u in trials]
print(f"response at A: pattern {best:.4f}, best of 2000 random unit signals {max(others):.4f}")
