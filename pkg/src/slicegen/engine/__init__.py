"""Tensor math with reverse-mode autodiff, plus the Adam optimizer."""

from .kernels import backend_name
from .optim import Adam
from .tensor import (
    Tape,
    Tensor,
    absolute,
    add,
    backward,
    concat,
    conv2d,
    exp,
    gather,
    grad_enabled,
    leaky_relu,
    log,
    matmul,
    mean,
    mul,
    no_grad,
    relu,
    reshape,
    scale,
    sigmoid,
    slice_axis,
    sqrt,
    square,
    sub,
    tanh,
    tensor_sum,
    transposed_conv2d,
)

__all__ = [
    "Adam",
    "Tape",
    "Tensor",
    "absolute",
    "add",
    "backend_name",
    "backward",
    "concat",
    "conv2d",
    "exp",
    "gather",
    "grad_enabled",
    "leaky_relu",
    "log",
    "matmul",
    "mean",
    "mul",
    "no_grad",
    "relu",
    "reshape",
    "scale",
    "sigmoid",
    "slice_axis",
    "sqrt",
    "square",
    "sub",
    "tanh",
    "tensor_sum",
    "transposed_conv2d",
]
