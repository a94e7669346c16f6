# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled im2col/col2im, same layout contract as the numpy fallback.

col2im accumulates in (i, j) kernel-offset order, matching the fallback's
slice-wise adds, so both backends are bit-identical in float32.
"""

import numpy as np


def output_hw(int h, int w, int kh, int kw, int stride, int pad):
    return (h + 2 * pad - kh) // stride + 1, (w + 2 * pad - kw) // stride + 1


def im2col(float[:, :, :, ::1] x, int kh, int kw, int stride, int pad):
    cdef int n = x.shape[0], c = x.shape[1], h = x.shape[2], w = x.shape[3]
    cdef int oh = (h + 2 * pad - kh) // stride + 1
    cdef int ow = (w + 2 * pad - kw) // stride + 1
    out = np.empty((c * kh * kw, n * oh * ow), dtype=np.float32)
    cdef float[:, ::1] cols = out
    cdef int b, ch, i, j, p, q, hi, wi, row, col
    for ch in range(c):
        for i in range(kh):
            for j in range(kw):
                row = (ch * kh + i) * kw + j
                for b in range(n):
                    for p in range(oh):
                        hi = p * stride + i - pad
                        col = (b * oh + p) * ow
                        if hi < 0 or hi >= h:
                            for q in range(ow):
                                cols[row, col + q] = 0.0
                            continue
                        for q in range(ow):
                            wi = q * stride + j - pad
                            if wi < 0 or wi >= w:
                                cols[row, col + q] = 0.0
                            else:
                                cols[row, col + q] = x[b, ch, hi, wi]
    return out


def col2im(float[:, ::1] cols, int n, int c, int h, int w,
           int kh, int kw, int stride, int pad):
    cdef int oh = (h + 2 * pad - kh) // stride + 1
    cdef int ow = (w + 2 * pad - kw) // stride + 1
    out = np.zeros((n, c, h, w), dtype=np.float32)
    cdef float[:, :, :, ::1] img = out
    cdef int b, ch, i, j, p, q, hi, wi, row, col
    for i in range(kh):
        for j in range(kw):
            for ch in range(c):
                row = (ch * kh + i) * kw + j
                for b in range(n):
                    for p in range(oh):
                        hi = p * stride + i - pad
                        if hi < 0 or hi >= h:
                            continue
                        col = (b * oh + p) * ow
                        for q in range(ow):
                            wi = q * stride + j - pad
                            if 0 <= wi < w:
                                img[b, ch, hi, wi] += cols[row, col + q]
    return out
