"""Powerset convolution, localized filters, matched patterns and pooling."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .core import (DomainMismatchError, GroundSet, SetFunction, ShiftModel,
                   cardinalities, shift_indices)
from .transforms import fourier_forward, fourier_inverse, frequency_response


class DegenerateFilterError(ValueError):
    """The restricted filter is identically zero, so no pattern is defined."""


class UnsupportedModelError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class FilterSpec:
    """A filter ``h`` (itself a set function), optionally k-localized."""

    coeffs: SetFunction
    locality: Optional[int] = None

    def __post_init__(self):
        coeffs = self.coeffs
        if not isinstance(coeffs, SetFunction):
            coeffs = SetFunction.from_values(coeffs)
            object.__setattr__(self, "coeffs", coeffs)
        if self.locality is not None:
            k = int(self.locality)
            if k < 0:
                raise ValueError("locality must be non-negative")
            far = cardinalities(coeffs.n) > k
            if np.any(coeffs.values[far] != 0.0):
                raise ValueError(f"filter has nonzero coefficients on subsets larger than k={k}")

    @property
    def ground(self) -> GroundSet:
        return self.coeffs.ground

    @property
    def n(self) -> int:
        return self.coeffs.n

    @property
    def values(self) -> np.ndarray:
        return self.coeffs.values

    def support(self) -> np.ndarray:
        """Subset indices that may carry nonzero coefficients."""
        if self.locality is None:
            return np.arange(self.ground.size)
        return np.flatnonzero(cardinalities(self.n) <= self.locality)


def as_filter(h) -> FilterSpec:
    if isinstance(h, FilterSpec):
        return h
    if isinstance(h, SetFunction):
        return FilterSpec(h)
    return FilterSpec(SetFunction.from_values(h))


def _check_pair(h: FilterSpec, s: SetFunction):
    if h.n != s.n:
        raise DomainMismatchError(f"filter is on n={h.n} but signal on n={s.n}")


def convolve_direct(h, s: SetFunction, model: ShiftModel = ShiftModel.ABSORB) -> SetFunction:
    """Reference convolution ``(h * s)_A = sum_Q h_Q s_{shift_Q(A)}``.

    Loops over the filter support (all 2**n subsets unless localized), so the
    cost is O(|support| * 2**n). Meant as a test oracle.
    """
    h = as_filter(h)
    _check_pair(h, s)
    model = ShiftModel.parse(model)
    out = np.zeros(s.ground.size)
    for Q in h.support():
        c = h.values[Q]
        if c != 0.0:
            out += c * s.values[shift_indices(s.n, int(Q), model)]
    return SetFunction(s.ground, out)


def convolve_spectral(h, s: SetFunction, model: ShiftModel = ShiftModel.ABSORB) -> SetFunction:
    """Convolution through the Fourier domain, O(n 2**n)."""
    h = as_filter(h)
    _check_pair(h, s)
    model = ShiftModel.parse(model)
    response = frequency_response(h.coeffs, model).values
    spectrum = fourier_forward(s, model).values
    return fourier_inverse(SetFunction(s.ground, response * spectrum), model)


def convolve(h, s: SetFunction, model: ShiftModel = ShiftModel.ABSORB) -> SetFunction:
    return convolve_spectral(h, s, model)


def make_one_hop(c0: float, c: Sequence[float], labels=None) -> FilterSpec:
    """One-hop filter with ``h_{} = c0`` and ``h_{x_i} = c[i]``."""
    c = np.asarray(c, dtype=np.float64)
    if c.ndim != 1 or c.shape[0] < 1:
        raise DomainMismatchError("need one coefficient per ground set element")
    n = c.shape[0]
    if labels is not None and len(labels) != n:
        raise DomainMismatchError("labels and coefficients differ in length")
    values = np.zeros(1 << n)
    values[0] = c0
    values[1 << np.arange(n)] = c
    return FilterSpec(SetFunction(GroundSet(n, labels), values), locality=1)


def restrict_filter(h, A) -> FilterSpec:
    """Filter on the ground set A with ``h'_{Q1} = sum_{Q2 in 2^(N\\A)} h_{Q1 | Q2}``.

    The result lives on the elements of A in their original order, so
    ``(h * s)_A`` equals ``(h' * s|_{2^A})_A`` under the absorbing convolution.
    """
    h = as_filter(h)
    A = h.ground.check_subset(A)
    n = h.n
    members = [i for i in range(n) if A >> i & 1]
    # sum over all coefficients whose in-A part is Q1: bucket by Q & A
    buckets = np.zeros(1 << n)
    np.add.at(buckets, np.arange(1 << n) & A, h.values)
    m = len(members)
    sub = np.arange(1 << m)
    orig = np.zeros(1 << m, dtype=np.int64)
    for j, i in enumerate(members):
        orig |= ((sub >> j) & 1) << i
    values = buckets[orig]
    labels = None
    if h.ground.labels is not None:
        labels = tuple(h.ground.labels[i] for i in members)
    return FilterSpec(SetFunction(GroundSet(m, labels), values))


def matched_pattern(h, A, model: ShiftModel = ShiftModel.ABSORB) -> SetFunction:
    """Unit-norm signal maximizing ``(h * s)_A`` over ``||s||_2 = 1``.

    ``p_B = h'_{A \\ B} / ||h'||`` for ``B`` inside ``A`` and zero elsewhere,
    where ``h'`` is ``restrict_filter(h, A)``.
    """
    if ShiftModel.parse(model) is not ShiftModel.ABSORB:
        raise UnsupportedModelError("matched patterns are only defined for the absorbing shift")
    h = as_filter(h)
    A = h.ground.check_subset(A)
    n = h.n
    idx = np.arange(1 << n)
    inside = (idx & ~A) == 0
    # h'_{Q1} for Q1 inside A, read off at Q1 = A \ B. Sums are correctly
    # rounded (fsum) so the pattern does not depend on summation order.
    keys = idx & A
    order = np.argsort(keys, kind="stable")
    starts = np.flatnonzero(np.r_[True, np.diff(keys[order]) != 0])
    groups = np.split(h.values[order], starts[1:])
    hprime = np.zeros(1 << n)
    hprime[keys[order][starts]] = [math.fsum(g) for g in groups]
    norm = math.sqrt(math.fsum(hprime * hprime))
    if norm == 0.0:
        raise DegenerateFilterError(f"restricted filter at A={A} is zero")
    p = np.zeros(1 << n)
    B = idx[inside]
    p[B] = hprime[A & ~B] / norm
    return SetFunction(h.ground, p)


def pool_indices(n: int, X: int) -> np.ndarray:
    """Input subset index for each output subset of ``N'(X)``.

    The merged element takes the bit position of the smallest element of X;
    the other elements keep their relative order.
    """
    members = [i for i in range(n) if X >> i & 1]
    first = members[0]
    masks = []
    for i in range(n):
        if i == first:
            masks.append(X)
        elif not X >> i & 1:
            masks.append(1 << i)
    m = len(masks)
    sub = np.arange(1 << m)
    idx = np.zeros(1 << m, dtype=np.int64)
    for j, mask in enumerate(masks):
        idx |= ((sub >> j) & 1) * mask
    return idx


def pool_combine(s: SetFunction, X) -> SetFunction:
    """Merge the elements of X into one, keeping values where B & X is empty or X."""
    X = s.ground.check_subset(X)
    if bin(X).count("1") < 2:
        raise ValueError("pooling needs a merge set with at least two elements")
    idx = pool_indices(s.n, X)
    labels = None
    if s.ground.labels is not None:
        members = [i for i in range(s.n) if X >> i & 1]
        merged = tuple(s.ground.labels[i] for i in members)
        labels = []
        for i in range(s.n):
            if i == members[0]:
                labels.append(merged)
            elif i not in members:
                labels.append(s.ground.labels[i])
    return SetFunction(GroundSet(s.n - bin(X).count("1") + 1, labels), s.values[idx])


def pool_max_element(s: SetFunction, x: int) -> SetFunction:
    """``out_B = max(s_B, s_{B | {x}})`` for B in the powerset of N \\ {x}.

    ``x`` is a 1-based element index (or a label when the ground set has labels).
    """
    if s.ground.labels is not None and x in s.ground.labels:
        i = s.ground.labels.index(x)
    elif isinstance(x, (int, np.integer)) and 1 <= x <= s.n:
        i = int(x) - 1
    else:
        raise DomainMismatchError(f"unknown element {x!r}")
    m = s.n - 1
    sub = np.arange(1 << m)
    low = sub & ((1 << i) - 1)
    high = (sub >> i) << (i + 1)
    without = low | high
    out = np.maximum(s.values[without], s.values[without | (1 << i)])
    labels = None
    if s.ground.labels is not None:
        labels = s.ground.labels[:i] + s.ground.labels[i + 1:]
    return SetFunction(GroundSet(m, labels), out)
