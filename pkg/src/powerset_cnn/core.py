"""Ground sets, subset bitmasks, set functions and powerset shifts.

Subsets of a ground set ``N = {x_1, ..., x_n}`` are encoded as integers in
``[0, 2**n)``: bit ``i - 1`` is set iff ``x_i`` belongs to the subset. Every
other module relies on this single little-endian convention.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

MAX_N = 20


class DomainMismatchError(ValueError):
    """Raised when a subset, signal or filter does not fit the ground set."""


class ShiftModel(enum.Enum):
    """Which notion of set shift (and hence convolution) is used.

    ABSORB:  (T_Q s)_A = s_{A \\ Q}
    UNION:   (T_Q s)_A = s_{A | Q}
    SYMDIFF: (T_Q s)_A = s_{A ^ Q}
    """

    ABSORB = "absorb"
    UNION = "union"
    SYMDIFF = "symdiff"

    @classmethod
    def parse(cls, value) -> "ShiftModel":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ValueError(f"unknown shift model {value!r}") from None


@dataclass(frozen=True)
class GroundSet:
    n: int
    labels: Optional[tuple] = None

    def __post_init__(self):
        # n == 0 (one subset, the empty set) only arises from restriction/pooling
        if not isinstance(self.n, (int, np.integer)) or self.n < 0:
            raise ValueError(f"ground set size must be a non-negative integer, got {self.n!r}")
        if self.n > MAX_N:
            raise ValueError(f"ground set size {self.n} exceeds the supported maximum {MAX_N}")
        if self.labels is not None:
            labels = tuple(self.labels)
            if len(labels) != self.n:
                raise ValueError("labels must have exactly n entries")
            if len(set(labels)) != self.n:
                raise ValueError("labels must be unique")
            object.__setattr__(self, "labels", labels)

    @property
    def size(self) -> int:
        """Number of subsets, 2**n."""
        return 1 << self.n

    def check_subset(self, bits) -> int:
        bits = int(bits)
        if bits < 0 or bits >= self.size:
            raise DomainMismatchError(f"subset index {bits} out of range for n={self.n}")
        return bits

    def subset(self, elements: Sequence) -> int:
        """Bitmask of a subset given as element labels or 1-based element indices."""
        bits = 0
        for e in elements:
            if self.labels is not None and e in self.labels:
                i = self.labels.index(e)
            elif isinstance(e, (int, np.integer)) and 1 <= e <= self.n:
                i = int(e) - 1
            else:
                raise DomainMismatchError(f"unknown element {e!r}")
            bits |= 1 << i
        return bits

    def elements(self, bits) -> list:
        bits = self.check_subset(bits)
        idx = [i for i in range(self.n) if bits >> i & 1]
        if self.labels is None:
            return [i + 1 for i in idx]
        return [self.labels[i] for i in idx]


def popcount(bits: np.ndarray) -> np.ndarray:
    """Cardinality of each subset in an integer array of bitmasks."""
    bits = np.asarray(bits, dtype=np.int64)
    out = np.zeros(bits.shape, dtype=np.int64)
    while np.any(bits):
        out += bits & 1
        bits = bits >> 1
    return out


def cardinalities(n: int) -> np.ndarray:
    """|A| for every subset index A of an n-element ground set."""
    card = np.zeros(1, dtype=np.int64)
    for _ in range(n):
        card = np.concatenate([card, card + 1])
    return card


@dataclass(frozen=True, eq=False)
class SetFunction:
    """A real signal on the powerset; ``values[b]`` is the value at subset ``b``."""

    ground: GroundSet
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        if values.ndim != 1 or values.shape[0] != self.ground.size:
            raise DomainMismatchError(
                f"expected {self.ground.size} values for n={self.ground.n}, got shape {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("set function values must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def from_values(cls, values, labels=None) -> "SetFunction":
        values = np.asarray(values, dtype=np.float64)
        size = values.shape[0]
        n = size.bit_length() - 1
        if size < 1 or (1 << n) != size:
            raise DomainMismatchError(f"length {size} is not a power of two")
        return cls(GroundSet(n, labels), values)

    @property
    def n(self) -> int:
        return self.ground.n

    def __len__(self):
        return self.values.shape[0]

    def __getitem__(self, bits) -> float:
        return evaluate(self, bits)

    def __array__(self, dtype=None, copy=None):
        return np.asarray(self.values, dtype=dtype)

    def __add__(self, other: "SetFunction") -> "SetFunction":
        _check_same_ground(self, other)
        return SetFunction(self.ground, self.values + other.values)

    def __sub__(self, other: "SetFunction") -> "SetFunction":
        _check_same_ground(self, other)
        return SetFunction(self.ground, self.values - other.values)

    def __mul__(self, alpha: float) -> "SetFunction":
        return SetFunction(self.ground, self.values * float(alpha))

    __rmul__ = __mul__

    def allclose(self, other: "SetFunction", rtol=1e-12, atol=1e-12) -> bool:
        return self.ground.n == other.ground.n and np.allclose(
            self.values, other.values, rtol=rtol, atol=atol)


def _check_same_ground(a: SetFunction, b: SetFunction):
    if a.ground.n != b.ground.n:
        raise DomainMismatchError(f"ground set sizes differ: {a.ground.n} vs {b.ground.n}")


def evaluate(s: SetFunction, A) -> float:
    return float(s.values[s.ground.check_subset(A)])


def shift_indices(n: int, Q: int, model: ShiftModel) -> np.ndarray:
    """Index map ``idx`` with ``(T_Q s)_A = s[idx[A]]``."""
    A = np.arange(1 << n, dtype=np.int64)
    model = ShiftModel.parse(model)
    if model is ShiftModel.ABSORB:
        return A & ~Q
    if model is ShiftModel.UNION:
        return A | Q
    return A ^ Q


def shift(s: SetFunction, Q, model: ShiftModel = ShiftModel.ABSORB) -> SetFunction:
    Q = s.ground.check_subset(Q)
    return SetFunction(s.ground, s.values[shift_indices(s.n, Q, model)])


def shift_matrix(n: int, Q: int, model: ShiftModel) -> np.ndarray:
    """Dense 2**n x 2**n matrix of the shift T_Q (for brute-force checks)."""
    size = 1 << n
    T = np.zeros((size, size))
    T[np.arange(size), shift_indices(n, Q, model)] = 1.0
    return T


def compose_shift_check(Q, R, s: SetFunction) -> bool:
    """Check T_Q(T_R s) == T_{Q|R} s for the absorbing shift."""
    lhs = shift(shift(s, R, ShiftModel.ABSORB), Q, ShiftModel.ABSORB)
    rhs = shift(s, int(Q) | int(R), ShiftModel.ABSORB)
    return bool(np.array_equal(lhs.values, rhs.values))
