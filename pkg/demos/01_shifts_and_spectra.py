"""Shifts, Fourier transforms and frequency responses on a small powerset.

Run with ``python demos/01_shifts_and_spectra.py``.
"""
import numpy as np

from powerset_cnn.core import GroundSet, SetFunction, ShiftModel, shift
from powerset_cnn.transforms import (TransformKind, dense_matrix, fourier_forward,
                                     fourier_inverse, frequency_response)

ground = GroundSet(3, labels=("a", "b", "c"))
rng = np.random.default_rng(0)
s = SetFunction(ground, rng.integers(-3, 4, 8).astype(float))

print("signal, indexed by subset bitmask")
for bits in range(8):
    print(f"  {{{','.join(ground.elements(bits))}}}: {s[bits]:+.0f}")

# one shift per model, by Q = {a}
Q = ground.subset(["a"])
for model in ShiftModel:
    print(f"{model.name:8s} shift by {{a}}:", shift(s, Q, model).values)

# the transforms are Kronecker powers of a 2x2 base; print n=1 to see the base
for model in ShiftModel:
    print(f"{model.name:8s} forward base\n", dense_matrix(TransformKind.SIGNAL_FORWARD, model, 1))

# forward followed by inverse gives the signal back
for model in ShiftModel:
    back = fourier_inverse(fourier_forward(s, model), model)
    print(f"{model.name:8s} round trip ok:", back.allclose(s))

# a filter's frequency response is what multiplies the spectrum pointwise
h = SetFunction(ground, np.array([1.0, 0.5, 0.0, 0.0, -0.5, 0.0, 0.0, 0.0]))
print("ABSORB response of h:", frequency_response(h).values)
