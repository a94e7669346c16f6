"""Forward-value oracles and contract checks for the tensor op catalog."""

import numpy as np
import pytest

import slicegen.engine as E
from slicegen.errors import ContractError, DomainError, ShapeError


def test_add_vectors():
    out = E.add(E.Tensor([1.0, 2.0]), E.Tensor([3.0, 4.0]))
    assert np.array_equal(out.data, np.array([4.0, 6.0], dtype=np.float32))


def test_conv2d_of_ones():
    x = E.Tensor(np.ones((1, 1, 3, 3)))
    k = E.Tensor(np.ones((1, 1, 2, 2)))
    out = E.conv2d(x, k, stride=1, padding=0)
    assert out.shape == (1, 1, 2, 2)
    assert np.array_equal(out.data, np.full((1, 1, 2, 2), 4.0, dtype=np.float32))


def test_matmul_identity():
    rng = np.random.default_rng(0)
    a = rng.standard_normal((3, 5)).astype(np.float32)
    out = E.matmul(E.Tensor(np.eye(3)), E.Tensor(a))
    assert np.array_equal(out.data, a)


def test_scalar_multiply():
    out = E.scale(E.Tensor([1.0, -2.0]), 2.5)
    assert np.array_equal(out.data, np.array([2.5, -5.0], dtype=np.float32))


def test_elementwise_values(rng):
    x = rng.uniform(0.2, 2.0, size=(4, 5)).astype(np.float32)
    t = E.Tensor(x)
    assert np.allclose(E.exp(t).data, np.exp(x))
    assert np.allclose(E.log(t).data, np.log(x))
    assert np.allclose(E.sqrt(t).data, np.sqrt(x))
    assert np.allclose(E.square(t).data, x * x)
    assert np.allclose(E.tanh(t).data, np.tanh(x))
    assert np.allclose(E.sigmoid(t).data, 1.0 / (1.0 + np.exp(-x)))
    y = rng.standard_normal((4, 5)).astype(np.float32)
    ty = E.Tensor(y)
    assert np.allclose(E.relu(ty).data, np.maximum(y, 0))
    assert np.allclose(E.leaky_relu(ty, 0.2).data, np.where(y > 0, y, 0.2 * y))
    assert np.allclose(E.absolute(ty).data, np.abs(y))


def test_sigmoid_is_overflow_safe():
    out = E.sigmoid(E.Tensor([-200.0, 0.0, 200.0]))
    assert np.all(np.isfinite(out.data))
    assert out.data[0] >= 0.0 and out.data[2] <= 1.0


def test_reductions_scalar():
    t = E.Tensor(np.arange(6, dtype=np.float32).reshape(2, 3))
    assert E.tensor_sum(t).item() == 15.0
    assert E.mean(t).item() == 2.5
    assert E.tensor_sum(t).shape == ()


def test_reshape_concat_slice_gather(rng):
    x = rng.standard_normal((4, 6)).astype(np.float32)
    t = E.Tensor(x)
    assert E.reshape(t, (2, 12)).shape == (2, 12)
    cat = E.concat([t, t], axis=1)
    assert cat.shape == (4, 12)
    assert np.array_equal(cat.data[:, :6], x)
    sl = E.slice_axis(t, 1, 2, 5)
    assert np.array_equal(sl.data, x[:, 2:5])
    g = E.gather(t, [3, 0, 0])
    assert np.array_equal(g.data, x[[3, 0, 0]])


def test_shape_errors():
    with pytest.raises(ShapeError):
        E.add(E.Tensor(np.ones((2, 3))), E.Tensor(np.ones((4, 5))))
    with pytest.raises(ShapeError):
        E.matmul(E.Tensor(np.ones((2, 3))), E.Tensor(np.ones((2, 3))))
    with pytest.raises(ShapeError):
        E.conv2d(E.Tensor(np.ones((1, 2, 4, 4))), E.Tensor(np.ones((1, 3, 2, 2))))
    with pytest.raises(ShapeError):
        E.slice_axis(E.Tensor(np.ones(4)), 0, 3, 2)


def test_domain_errors():
    with pytest.raises(DomainError):
        E.log(E.Tensor([1.0, -1.0]))
    with pytest.raises(DomainError):
        E.sqrt(E.Tensor([-0.5]))
    with pytest.raises(DomainError):
        E.Tensor([np.nan])
    with pytest.raises(DomainError):
        E.Tensor([np.inf])


def test_forward_determinism(rng):
    x = rng.standard_normal((2, 3, 8, 8)).astype(np.float32)
    k = rng.standard_normal((4, 3, 3, 3)).astype(np.float32)
    a = E.conv2d(E.Tensor(x), E.Tensor(k), stride=2, padding=1)
    b = E.conv2d(E.Tensor(x), E.Tensor(k), stride=2, padding=1)
    assert np.array_equal(a.data, b.data)


def test_non_scalar_backward_rejected():
    t = E.Tensor(np.ones(3), requires_grad=True)
    with pytest.raises(ContractError):
        E.backward(E.scale(t, 2.0))


def test_no_grad_suppresses_recording():
    t = E.Tensor(np.ones(3), requires_grad=True)
    with E.no_grad():
        out = E.scale(t, 2.0)
    assert not out.requires_grad
    assert out._parents == ()
