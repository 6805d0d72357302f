"""Convolutional signal processing and learning on set functions."""
from .core import (MAX_N, DomainMismatchError, GroundSet, SetFunction, ShiftModel, cardinalities,
                   evaluate, shift, shift_matrix)
from .filtering import (FilterSpec, convolve, convolve_direct, convolve_spectral, make_one_hop,
                        matched_pattern, pool_combine, pool_max_element, restrict_filter)
from .transforms import (TransformKind, dense_matrix, fourier_forward, fourier_inverse,
                         frequency_response, kron_apply, kron_apply_inplace)

__version__ = "0.1.0"

__all__ = [
    "DomainMismatchError", "FilterSpec", "GroundSet", "MAX_N", "SetFunction", "ShiftModel",
    "TransformKind", "cardinalities", "convolve", "convolve_direct", "convolve_spectral",
    "dense_matrix", "evaluate", "fourier_forward", "fourier_inverse", "frequency_response",
    "kron_apply", "kron_apply_inplace", "make_one_hop", "matched_pattern", "pool_combine",
    "pool_max_element", "restrict_filter", "shift", "shift_matrix",
]
