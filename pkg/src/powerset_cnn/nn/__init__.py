from .checkpoint import load_checkpoint, save_checkpoint
from .layers import (Accumulate, Dense, Flatten, Layer, PowersetPool, ReLU, SpectralConv,
                     conv_basis, one_hop_support, relu, softmax_cross_entropy)
from .models import MODEL_TAGS, Model, ModelConfig, build_model, canonical_tag
from .optim import Adam, lr_schedule

__all__ = [
    "Accumulate", "Adam", "Dense", "Flatten", "Layer", "MODEL_TAGS", "Model", "ModelConfig",
    "PowersetPool", "ReLU", "SpectralConv", "build_model", "canonical_tag", "conv_basis",
    "load_checkpoint", "lr_schedule", "one_hop_support", "relu", "save_checkpoint",
    "softmax_cross_entropy",
]
