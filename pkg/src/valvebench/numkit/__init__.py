from ._backend import BACKEND, kernels
from .net import (
    ACTIVATIONS,
    AdamState,
    DenseNet,
    GradientSet,
    Layer,
    Workspace,
    adam_step,
    adam_step_array,
    backward,
    backward_cached,
    forward,
    forward_cached,
    net_from_payload,
    net_to_payload,
    param_digest,
    soft_update,
)

__all__ = [
    "ACTIVATIONS",
    "AdamState",
    "BACKEND",
    "DenseNet",
    "GradientSet",
    "Layer",
    "Workspace",
    "adam_step",
    "adam_step_array",
    "backward",
    "backward_cached",
    "forward",
    "forward_cached",
    "kernels",
    "net_from_payload",
    "net_to_payload",
    "param_digest",
    "soft_update",
]
