"""Fast Kronecker-factored powerset Fourier transforms.

Every transform here is an n-fold Kronecker power of a 2x2 base matrix, with
the factor for element ``x_i`` acting on bit ``i - 1`` of the subset index.
They are applied stage-wise with 2x2 butterflies, either in place on one
signal (``kron_apply_inplace``) or over many columns at once (``kron_apply``).

Base matrices per shift model::

                 forward          inverse          frequency response
    ABSORB   [[1, 0],[1,-1]]   [[1, 0],[1,-1]]   [[1, 1],[1, 0]]
    UNION    [[1,-1],[0, 1]]   [[1, 1],[0, 1]]   [[1, 0],[1, 1]]
    SYMDIFF  [[1, 1],[1,-1]]   WHT / 2**n        [[1, 1],[1,-1]]
"""
from __future__ import annotations

import enum
from functools import lru_cache

import numba
import numpy as np

from .core import DomainMismatchError, SetFunction, ShiftModel


class TransformKind(enum.Enum):
    SIGNAL_FORWARD = "forward"
    SIGNAL_INVERSE = "inverse"
    FILTER_RESPONSE = "response"


_BASES = {
    (TransformKind.SIGNAL_FORWARD, ShiftModel.ABSORB): ((1.0, 0.0), (1.0, -1.0)),
    (TransformKind.SIGNAL_INVERSE, ShiftModel.ABSORB): ((1.0, 0.0), (1.0, -1.0)),
    (TransformKind.FILTER_RESPONSE, ShiftModel.ABSORB): ((1.0, 1.0), (1.0, 0.0)),
    (TransformKind.SIGNAL_FORWARD, ShiftModel.UNION): ((1.0, -1.0), (0.0, 1.0)),
    (TransformKind.SIGNAL_INVERSE, ShiftModel.UNION): ((1.0, 1.0), (0.0, 1.0)),
    (TransformKind.FILTER_RESPONSE, ShiftModel.UNION): ((1.0, 0.0), (1.0, 1.0)),
    (TransformKind.SIGNAL_FORWARD, ShiftModel.SYMDIFF): ((1.0, 1.0), (1.0, -1.0)),
    # unnormalized; the 1/2**n factor is applied once after the butterflies
    (TransformKind.SIGNAL_INVERSE, ShiftModel.SYMDIFF): ((1.0, 1.0), (1.0, -1.0)),
    (TransformKind.FILTER_RESPONSE, ShiftModel.SYMDIFF): ((1.0, 1.0), (1.0, -1.0)),
}


def base_matrix(kind: TransformKind, model: ShiftModel) -> np.ndarray:
    """The 2x2 base matrix for ``(kind, model)``, normalization included."""
    model = ShiftModel.parse(model)
    kind = TransformKind(kind)
    base = np.array(_BASES[kind, model])
    if kind is TransformKind.SIGNAL_INVERSE and model is ShiftModel.SYMDIFF:
        base = base / 2.0
    return base


def _scale(kind: TransformKind, model: ShiftModel, n: int) -> float:
    if kind is TransformKind.SIGNAL_INVERSE and model is ShiftModel.SYMDIFF:
        return 1.0 / (1 << n)
    return 1.0


def dense_matrix(kind: TransformKind, model: ShiftModel, n: int) -> np.ndarray:
    """Explicit 2**n x 2**n transform matrix (test oracle; small n only)."""
    base = base_matrix(kind, ShiftModel.parse(model))
    M = np.ones((1, 1))
    for _ in range(n):
        M = np.kron(base, M)
    return M


_CHUNK_BITS = 12


@numba.njit(cache=True, fastmath=True)
def _radix4(v, n, b00, b01, b10, b11):
    size = v.shape[0]
    h = 1
    k = 0
    while k + 1 < n:
        for i in range(0, size, 4 * h):
            for j in range(i, i + h):
                a0 = v[j]
                a1 = v[j + h]
                a2 = v[j + 2 * h]
                a3 = v[j + 3 * h]
                e0 = b00 * a0 + b01 * a1
                e1 = b10 * a0 + b11 * a1
                e2 = b00 * a2 + b01 * a3
                e3 = b10 * a2 + b11 * a3
                v[j] = b00 * e0 + b01 * e2
                v[j + h] = b00 * e1 + b01 * e3
                v[j + 2 * h] = b10 * e0 + b11 * e2
                v[j + 3 * h] = b10 * e1 + b11 * e3
        h *= 4
        k += 2
    if k < n:
        for i in range(0, size, 2 * h):
            for j in range(i, i + h):
                a0 = v[j]
                a1 = v[j + h]
                v[j] = b00 * a0 + b01 * a1
                v[j + h] = b10 * a0 + b11 * a1


@numba.njit(cache=True, fastmath=True)
def _butterflies(buf, n, b00, b01, b10, b11):
    # Low bits first, one L1-sized chunk at a time. The high bits then act on
    # the columns of a (2**(n-m), 2**m) view, 64 columns at a time through a
    # small scratch tile (power-of-two row strides would thrash the cache if
    # done in place), so the array is streamed about twice for any n.
    m = min(n, _CHUNK_BITS)
    size = 1 << n
    chunk = 1 << m
    for start in range(0, size, chunk):
        _radix4(buf[start:start + chunk], m, b00, b01, b10, b11)
    if n > m:
        view = buf.reshape((size >> m, chunk))
        _blocked_butterflies(view, view, n - m, b00, b01, b10, b11, 64)


def kron_apply_inplace(buffer: np.ndarray, base, n: int | None = None) -> np.ndarray:
    """Overwrite ``buffer`` with ``base^{(x)n} @ buffer``.

    ``buffer`` must be a contiguous 1-D float array of length 2**n. The work is
    n stages of 2**(n-1) butterflies each, grouped so that every stage runs on
    cache-resident pieces of the buffer.
    Returns ``buffer`` for convenience.
    """
    if not isinstance(buffer, np.ndarray) or buffer.ndim != 1:
        raise TypeError("buffer must be a 1-D numpy array")
    size = buffer.shape[0]
    if size < 1 or size & (size - 1):
        raise DomainMismatchError(f"buffer length {size} is not a power of two")
    log = size.bit_length() - 1
    if n is None:
        n = log
    elif n != log:
        raise DomainMismatchError(f"buffer length {size} does not match n={n}")
    if not buffer.flags.c_contiguous or not buffer.flags.writeable:
        raise ValueError("buffer must be writeable and contiguous")
    if buffer.dtype not in (np.float32, np.float64):
        raise TypeError("buffer must hold float32 or float64 values")
    b = np.asarray(base, dtype=np.float64)
    if b.shape != (2, 2):
        raise ValueError("base must be a 2x2 matrix")
    c = buffer.dtype.type
    _butterflies(buffer, n, c(b[0, 0]), c(b[0, 1]), c(b[1, 0]), c(b[1, 1]))
    return buffer


def _transform(s: SetFunction, kind: TransformKind, model: ShiftModel) -> SetFunction:
    model = ShiftModel.parse(model)
    buf = np.array(s.values, dtype=np.float64)
    kron_apply_inplace(buf, _BASES[kind, model], s.n)
    scale = _scale(kind, model, s.n)
    if scale != 1.0:
        buf *= scale
    return SetFunction(s.ground, buf)


def fourier_forward(s: SetFunction, model: ShiftModel = ShiftModel.ABSORB) -> SetFunction:
    """Spectrum of ``s`` for the given shift model, indexed by frequencies B."""
    return _transform(s, TransformKind.SIGNAL_FORWARD, model)


def fourier_inverse(spectrum: SetFunction, model: ShiftModel = ShiftModel.ABSORB) -> SetFunction:
    return _transform(spectrum, TransformKind.SIGNAL_INVERSE, model)


def frequency_response(h: SetFunction, model: ShiftModel = ShiftModel.ABSORB) -> SetFunction:
    """Diagonal of the filtering operator ``s -> h * s`` in the Fourier basis."""
    return _transform(h, TransformKind.FILTER_RESPONSE, model)


@numba.njit(cache=True, fastmath=True)
def _blocked_butterflies(x, out, n, b00, b01, b10, b11, blk):
    # x, out: (2**n, R). A block of columns is copied to a contiguous scratch
    # buffer, all stages run there (two bits per pass), then it is written back.
    S, R = x.shape
    buf = np.empty((S, blk), dtype=x.dtype)
    for c0 in range(0, R, blk):
        w = min(blk, R - c0)
        for s in range(S):
            for c in range(w):
                buf[s, c] = x[s, c0 + c]
        h = 1
        k = 0
        while k + 1 < n:
            for i in range(0, S, 4 * h):
                for j in range(i, i + h):
                    for c in range(w):
                        a0 = buf[j, c]
                        a1 = buf[j + h, c]
                        a2 = buf[j + 2 * h, c]
                        a3 = buf[j + 3 * h, c]
                        e0 = b00 * a0 + b01 * a1
                        e1 = b10 * a0 + b11 * a1
                        e2 = b00 * a2 + b01 * a3
                        e3 = b10 * a2 + b11 * a3
                        buf[j, c] = b00 * e0 + b01 * e2
                        buf[j + h, c] = b00 * e1 + b01 * e3
                        buf[j + 2 * h, c] = b10 * e0 + b11 * e2
                        buf[j + 3 * h, c] = b10 * e1 + b11 * e3
            h *= 4
            k += 2
        if k < n:
            for i in range(0, S, 2 * h):
                for j in range(i, i + h):
                    for c in range(w):
                        a0 = buf[j, c]
                        a1 = buf[j + h, c]
                        buf[j, c] = b00 * a0 + b01 * a1
                        buf[j + h, c] = b10 * a0 + b11 * a1
        for s in range(S):
            for c in range(w):
                out[s, c0 + c] = buf[s, c]


def kron_apply(x: np.ndarray, base, axis: int = 0, block: int = 256) -> np.ndarray:
    """Return ``base^{(x)n}`` applied along ``axis`` of a batched array.

    The other axes are flattened into columns, which are transformed
    ``block`` at a time inside a cache-resident scratch buffer.
    """
    x = np.moveaxis(np.asarray(x), axis, 0)
    size = x.shape[0]
    n = size.bit_length() - 1
    if size < 1 or (1 << n) != size:
        raise DomainMismatchError(f"axis length {size} is not a power of two")
    rest = x.shape[1:]
    R = int(np.prod(rest, dtype=np.int64))
    if x.dtype not in (np.float32, np.float64):
        x = x.astype(np.float64)
    src = np.ascontiguousarray(x).reshape(size, R)
    out = np.empty_like(src)
    b = np.asarray(base, dtype=np.float64)
    if b.shape != (2, 2):
        raise ValueError("base must be a 2x2 matrix")
    c = src.dtype.type
    if R:
        _blocked_butterflies(src, out, n, c(b[0, 0]), c(b[0, 1]), c(b[1, 0]), c(b[1, 1]),
                             max(1, min(block, R)))
    return np.moveaxis(out.reshape((size,) + rest), 0, axis)


def apply_transform(x: np.ndarray, kind: TransformKind, model: ShiftModel,
                    axis: int = 0, transpose: bool = False) -> np.ndarray:
    """Batched transform along ``axis``; ``transpose`` applies the matrix transpose."""
    model = ShiftModel.parse(model)
    kind = TransformKind(kind)
    base = np.array(_BASES[kind, model])
    if transpose:
        base = base.T
    n = x.shape[axis].bit_length() - 1
    out = kron_apply(x, base, axis=axis)
    scale = _scale(kind, model, n)
    if scale != 1.0:
        out *= out.dtype.type(scale)
    return out


@lru_cache(maxsize=64)
def response_basis(n: int, model: ShiftModel, support: tuple) -> np.ndarray:
    """Matrix mapping filter coefficients on ``support`` to frequency responses.

    Column j is the frequency response of the indicator filter of subset
    ``support[j]``; shape (2**n, len(support)).
    """
    model = ShiftModel.parse(model)
    size = 1 << n
    E = np.zeros((size, len(support)))
    E[list(support), np.arange(len(support))] = 1.0
    M = apply_transform(E, TransformKind.FILTER_RESPONSE, model, axis=0)
    M.setflags(write=False)
    return M
