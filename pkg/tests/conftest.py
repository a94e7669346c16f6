import numpy as np
import pytest


def finite_difference_grad(loss_fn, x, eps=1e-3):
    """Central-difference gradient of a scalar loss over a float32 array.

    Uses the actually-representable perturbation as the denominator to keep
    float32 rounding out of the estimate.
    """
    x = np.asarray(x, dtype=np.float32)
    grad = np.zeros(x.shape, dtype=np.float64)
    flat = x.reshape(-1)
    gflat = grad.reshape(-1)
    for i in range(flat.size):
        orig = flat[i]
        hi = np.float32(orig + eps)
        lo = np.float32(orig - eps)
        flat[i] = hi
        loss_hi = loss_fn(x)
        flat[i] = lo
        loss_lo = loss_fn(x)
        flat[i] = orig
        gflat[i] = (loss_hi - loss_lo) / (float(hi) - float(lo))
    return grad


def relative_grad_error(analytic, numeric):
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    scale = max(np.abs(numeric).max(), 1.0)
    return np.abs(analytic - numeric).max() / scale


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
