"""Dense float32 tensors with reverse-mode automatic differentiation.

Values are plain numpy arrays; every op validates finiteness at its
boundary and, when gradients are requested, records itself so that
``backward`` can replay the chain rule. Reductions accumulate in float64
and store float32 results. Tensors are treated as immutable once created;
only the optimizer mutates parameter storage, under single ownership.
"""

from __future__ import annotations

import threading

import numpy as np

from ..errors import ContractError, DomainError, ShapeError
from . import kernels

_STATE = threading.local()


def grad_enabled():
    return getattr(_STATE, "grad_enabled", True)


class no_grad:
    """Context manager that disables op recording (inference mode)."""

    def __enter__(self):
        self._prev = grad_enabled()
        _STATE.grad_enabled = False
        return self

    def __exit__(self, *exc):
        _STATE.grad_enabled = self._prev
        return False


class Tensor:
    __slots__ = ("data", "grad", "requires_grad", "_parents", "_backward")

    def __init__(self, data, requires_grad=False):
        arr = np.asarray(data, dtype=np.float32)
        if arr.ndim and not arr.flags.c_contiguous:
            arr = np.ascontiguousarray(arr)
        if not np.all(np.isfinite(arr)):
            raise DomainError("tensor values must be finite")
        self.data = arr
        self.grad = None
        self.requires_grad = bool(requires_grad)
        self._parents = ()
        self._backward = None

    @property
    def shape(self):
        return self.data.shape

    @property
    def ndim(self):
        return self.data.ndim

    @property
    def size(self):
        return self.data.size

    def item(self):
        return float(self.data)

    def detach(self):
        return Tensor(self.data)

    def zero_grad(self):
        self.grad = None

    def __repr__(self):
        return f"Tensor(shape={self.shape}, requires_grad={self.requires_grad})"

    def __add__(self, other):
        return add(self, other)

    def __sub__(self, other):
        return sub(self, other)

    def __mul__(self, other):
        if isinstance(other, Tensor):
            return mul(self, other)
        return scale(self, other)

    def __rmul__(self, other):
        return scale(self, other)

    def __neg__(self):
        return scale(self, -1.0)

    def __matmul__(self, other):
        return matmul(self, other)

    def sum(self):
        return tensor_sum(self)

    def mean(self):
        return mean(self)

    def reshape(self, shape):
        return reshape(self, shape)


class Tape:
    """The ops that produced a tensor, in topological order.

    ``trace`` materializes the recorded graph reachable from ``root``;
    parents always precede the tensors they produced, so one reverse sweep
    applies every backward rule exactly once.
    """

    def __init__(self, nodes):
        self.nodes = nodes

    @classmethod
    def trace(cls, root):
        order = []
        visited = set()
        stack = [(root, False)]
        while stack:
            node, expanded = stack.pop()
            if expanded:
                order.append(node)
                continue
            if id(node) in visited:
                continue
            visited.add(id(node))
            stack.append((node, True))
            for parent in node._parents:
                if id(parent) not in visited:
                    stack.append((parent, False))
        return cls(order)


def backward(loss):
    """Accumulate d(loss)/d(leaf) into every requires_grad leaf.

    Repeated calls without zero_grad add up; intermediate gradients live
    only for the duration of the sweep.
    """
    if not isinstance(loss, Tensor):
        raise ContractError("backward expects a Tensor")
    if loss.data.ndim != 0:
        raise ContractError(f"backward expects a scalar loss, got shape {loss.shape}")
    tape = Tape.trace(loss)
    pending = {id(loss): np.ones((), dtype=np.float32)}
    for node in reversed(tape.nodes):
        grad = pending.pop(id(node), None)
        if grad is None:
            continue
        if node._backward is None:
            if node.requires_grad:
                if node.grad is None:
                    node.grad = np.zeros_like(node.data)
                node.grad += grad
            continue
        for parent, pgrad in zip(node._parents, node._backward(grad)):
            if pgrad is None or not parent.requires_grad:
                continue
            key = id(parent)
            if key in pending:
                pending[key] = pending[key] + pgrad
            else:
                pending[key] = pgrad


def _result(data, parents, backward_fn):
    out = Tensor(data)
    if grad_enabled() and any(p.requires_grad for p in parents):
        out.requires_grad = True
        out._parents = tuple(parents)
        out._backward = backward_fn
    return out


def _as_tensor(x):
    return x if isinstance(x, Tensor) else Tensor(x)


def _unbroadcast(grad, shape):
    """Reduce a broadcast gradient back to the operand's shape."""
    extra = grad.ndim - len(shape)
    if extra:
        grad = grad.sum(axis=tuple(range(extra)), dtype=np.float32)
    axes = tuple(i for i, n in enumerate(shape) if n == 1 and grad.shape[i] != 1)
    if axes:
        grad = grad.sum(axis=axes, keepdims=True, dtype=np.float32)
    return grad.reshape(shape)


def _broadcast_data(a, b, op_name):
    try:
        np.broadcast_shapes(a.shape, b.shape)
    except ValueError as exc:
        raise ShapeError(f"{op_name}: shapes {a.shape} and {b.shape} do not broadcast") from exc


# ---------------------------------------------------------------------------
# elementwise arithmetic


def add(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    _broadcast_data(a.data, b.data, "add")

    def bwd(g):
        return _unbroadcast(g, a.shape), _unbroadcast(g, b.shape)

    return _result(a.data + b.data, (a, b), bwd)


def sub(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    _broadcast_data(a.data, b.data, "sub")

    def bwd(g):
        return _unbroadcast(g, a.shape), _unbroadcast(np.negative(g), b.shape)

    return _result(a.data - b.data, (a, b), bwd)


def mul(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    _broadcast_data(a.data, b.data, "mul")

    def bwd(g):
        return _unbroadcast(g * b.data, a.shape), _unbroadcast(g * a.data, b.shape)

    return _result(a.data * b.data, (a, b), bwd)


def scale(a, s):
    a = _as_tensor(a)
    s = float(s)
    if not np.isfinite(s):
        raise DomainError("scale factor must be finite")

    def bwd(g):
        return (np.float32(s) * g,)

    return _result(a.data * np.float32(s), (a,), bwd)


# ---------------------------------------------------------------------------
# linear algebra


def matmul(a, b):
    a, b = _as_tensor(a), _as_tensor(b)
    if a.ndim != 2 or b.ndim != 2 or a.shape[1] != b.shape[0]:
        raise ShapeError(f"matmul: incompatible shapes {a.shape} @ {b.shape}")

    def bwd(g):
        return g @ b.data.T, a.data.T @ g

    return _result(a.data @ b.data, (a, b), bwd)


def conv2d(x, w, stride=1, padding=0):
    """Cross-correlation of NCHW input with (Cout, Cin, kh, kw) weights."""
    x, w = _as_tensor(x), _as_tensor(w)
    if x.ndim != 4 or w.ndim != 4:
        raise ShapeError("conv2d expects NCHW input and OIHW weights")
    n, ci, h, wd = x.shape
    co, ci2, kh, kw = w.shape
    if ci != ci2:
        raise ShapeError(f"conv2d: input channels {ci} != weight channels {ci2}")
    oh, ow = kernels.output_hw(h, wd, kh, kw, stride, padding)
    if oh < 1 or ow < 1:
        raise ShapeError(f"conv2d: kernel {kh}x{kw} does not fit input {h}x{wd}")
    cols = kernels.im2col(x.data, kh, kw, stride, padding)
    wmat = w.data.reshape(co, -1)
    out = np.ascontiguousarray((wmat @ cols).reshape(co, n, oh, ow).transpose(1, 0, 2, 3))

    def bwd(g):
        gmat = np.ascontiguousarray(g.transpose(1, 0, 2, 3)).reshape(co, -1)
        gx = kernels.col2im(wmat.T @ gmat, n, ci, h, wd, kh, kw, stride, padding)
        gw = (gmat @ cols.T).reshape(w.shape)
        return gx, gw

    return _result(out, (x, w), bwd)


def transposed_conv2d(x, w, stride=1, padding=0):
    """Adjoint of conv2d: NCHW input, (Cin, Cout, kh, kw) weights."""
    x, w = _as_tensor(x), _as_tensor(w)
    if x.ndim != 4 or w.ndim != 4:
        raise ShapeError("transposed_conv2d expects NCHW input and IOHW weights")
    n, ci, h, wd = x.shape
    ci2, co, kh, kw = w.shape
    if ci != ci2:
        raise ShapeError(f"transposed_conv2d: input channels {ci} != weight channels {ci2}")
    oh = (h - 1) * stride + kh - 2 * padding
    ow = (wd - 1) * stride + kw - 2 * padding
    if oh < 1 or ow < 1:
        raise ShapeError("transposed_conv2d: output would be empty")
    wmat = w.data.reshape(ci, -1)
    xmat = np.ascontiguousarray(x.data.transpose(1, 0, 2, 3)).reshape(ci, -1)
    out = kernels.col2im(wmat.T @ xmat, n, co, oh, ow, kh, kw, stride, padding)

    def bwd(g):
        gcols = kernels.im2col(np.ascontiguousarray(g), kh, kw, stride, padding)
        gx = np.ascontiguousarray((wmat @ gcols).reshape(ci, n, h, wd).transpose(1, 0, 2, 3))
        gw = (xmat @ gcols.T).reshape(w.shape)
        return gx, gw

    return _result(out, (x, w), bwd)


# ---------------------------------------------------------------------------
# elementwise nonlinearities


def relu(x):
    x = _as_tensor(x)
    out = np.maximum(x.data, 0.0)

    def bwd(g):
        return (g * (x.data > 0),)

    return _result(out, (x,), bwd)


def leaky_relu(x, alpha=0.2):
    x = _as_tensor(x)
    a = np.float32(alpha)
    out = np.where(x.data > 0, x.data, a * x.data)

    def bwd(g):
        return (g * np.where(x.data > 0, np.float32(1.0), a),)

    return _result(out, (x,), bwd)


def sigmoid(x):
    x = _as_tensor(x)
    # computed on the positive side only, for overflow safety
    pos = x.data >= 0
    e = np.exp(np.where(pos, -x.data, x.data))
    out = np.where(pos, 1.0 / (1.0 + e), e / (1.0 + e)).astype(np.float32)

    def bwd(g):
        return (g * out * (1.0 - out),)

    return _result(out, (x,), bwd)


def tanh(x):
    x = _as_tensor(x)
    out = np.tanh(x.data)

    def bwd(g):
        return (g * (1.0 - out * out),)

    return _result(out, (x,), bwd)


def exp(x):
    x = _as_tensor(x)
    out = np.exp(x.data)

    def bwd(g):
        return (g * out,)

    return _result(out, (x,), bwd)


def log(x):
    x = _as_tensor(x)
    if np.any(x.data <= 0):
        raise DomainError("log of a non-positive value")
    out = np.log(x.data)

    def bwd(g):
        return (g / x.data,)

    return _result(out, (x,), bwd)


def square(x):
    x = _as_tensor(x)

    def bwd(g):
        return (g * (2.0 * x.data),)

    return _result(x.data * x.data, (x,), bwd)


def sqrt(x):
    x = _as_tensor(x)
    if np.any(x.data < 0):
        raise DomainError("sqrt of a negative value")
    out = np.sqrt(x.data)

    def bwd(g):
        return (g * (0.5 / out),)

    return _result(out, (x,), bwd)


def absolute(x):
    x = _as_tensor(x)

    def bwd(g):
        return (g * np.sign(x.data).astype(np.float32),)

    return _result(np.abs(x.data), (x,), bwd)


# ---------------------------------------------------------------------------
# reductions (float64 accumulation, float32 results)


def tensor_sum(x):
    x = _as_tensor(x)
    val = np.float32(np.sum(x.data, dtype=np.float64))

    def bwd(g):
        return (np.full(x.shape, g, dtype=np.float32),)

    return _result(val, (x,), bwd)


def mean(x):
    x = _as_tensor(x)
    n = x.size
    val = np.float32(np.sum(x.data, dtype=np.float64) / n)

    def bwd(g):
        return (np.full(x.shape, g / np.float32(n), dtype=np.float32),)

    return _result(val, (x,), bwd)


# ---------------------------------------------------------------------------
# shape manipulation


def reshape(x, shape):
    x = _as_tensor(x)
    try:
        out = x.data.reshape(shape)
    except ValueError as exc:
        raise ShapeError(f"cannot reshape {x.shape} to {shape}") from exc

    def bwd(g):
        return (g.reshape(x.shape),)

    return _result(out, (x,), bwd)


def concat(tensors, axis=0):
    tensors = [_as_tensor(t) for t in tensors]
    if not tensors:
        raise ShapeError("concat of an empty sequence")
    try:
        out = np.concatenate([t.data for t in tensors], axis=axis)
    except ValueError as exc:
        raise ShapeError(f"concat: {exc}") from exc
    sizes = [t.shape[axis] for t in tensors]
    splits = np.cumsum(sizes)[:-1]

    def bwd(g):
        return tuple(np.ascontiguousarray(p) for p in np.split(g, splits, axis=axis))

    return _result(out, tuple(tensors), bwd)


def slice_axis(x, axis, start, stop):
    x = _as_tensor(x)
    if not (0 <= axis < x.ndim):
        raise ShapeError(f"slice_axis: axis {axis} out of range for ndim {x.ndim}")
    if not (0 <= start < stop <= x.shape[axis]):
        raise ShapeError(f"slice_axis: range [{start}, {stop}) invalid for size {x.shape[axis]}")
    index = tuple(slice(None) if d != axis else slice(start, stop) for d in range(x.ndim))

    def bwd(g):
        full = np.zeros(x.shape, dtype=np.float32)
        full[index] = g
        return (full,)

    return _result(np.ascontiguousarray(x.data[index]), (x,), bwd)


def gather(x, indices):
    """Select rows along axis 0 (batch gather)."""
    x = _as_tensor(x)
    idx = np.asarray(indices, dtype=np.intp)
    if idx.ndim != 1:
        raise ShapeError("gather expects a 1-D index array")
    if idx.size and (idx.min() < 0 or idx.max() >= x.shape[0]):
        raise ShapeError("gather index out of range")

    def bwd(g):
        full = np.zeros(x.shape, dtype=np.float32)
        np.add.at(full, idx, g)
        return (full,)

    return _result(x.data[idx], (x,), bwd)
