"""Pure-numpy im2col/col2im, the fallback backend for the conv kernels.

Layout contract (shared with the compiled backend):
  im2col(x, kh, kw, stride, pad) -> cols of shape (C*kh*kw, N*OH*OW)
    row index  = (c*kh + i)*kw + j
    col index  = (n*OH + oh)*OW + ow
  col2im is the exact adjoint: it scatter-adds cols back onto an
  (N, C, H, W) canvas, accumulating in (i, j) order so both backends
  produce bit-identical float32 results.
"""

import numpy as np


def output_hw(h, w, kh, kw, stride, pad):
    return (h + 2 * pad - kh) // stride + 1, (w + 2 * pad - kw) // stride + 1


def im2col(x, kh, kw, stride, pad):
    n, c, h, w = x.shape
    oh, ow = output_hw(h, w, kh, kw, stride, pad)
    if pad:
        xp = np.zeros((n, c, h + 2 * pad, w + 2 * pad), dtype=np.float32)
        xp[:, :, pad : pad + h, pad : pad + w] = x
    else:
        xp = x
    cols = np.empty((c, kh, kw, n, oh, ow), dtype=np.float32)
    for i in range(kh):
        for j in range(kw):
            patch = xp[:, :, i : i + oh * stride : stride, j : j + ow * stride : stride]
            cols[:, i, j] = patch.transpose(1, 0, 2, 3)
    return cols.reshape(c * kh * kw, n * oh * ow)


def col2im(cols, n, c, h, w, kh, kw, stride, pad):
    oh, ow = output_hw(h, w, kh, kw, stride, pad)
    cols6 = cols.reshape(c, kh, kw, n, oh, ow)
    canvas = np.zeros((n, c, h + 2 * pad, w + 2 * pad), dtype=np.float32)
    for i in range(kh):
        for j in range(kw):
            canvas[:, :, i : i + oh * stride : stride, j : j + ow * stride : stride] += (
                cols6[:, i, j].transpose(1, 0, 2, 3)
            )
    if pad:
        return np.ascontiguousarray(canvas[:, :, pad : pad + h, pad : pad + w])
    return canvas
