"""Backend selection for the conv hot kernels.

The compiled Cython extension is preferred; the numpy implementation is the
fallback. Set SLICEGEN_KERNELS=numpy to force the fallback (the benchmark
uses this). Both backends share one layout contract and are bit-identical,
so the choice never changes results.
"""

import os

from . import _conv_np

_FORCE_NUMPY = os.environ.get("SLICEGEN_KERNELS", "").lower() in ("numpy", "np", "py")

if _FORCE_NUMPY:
    _impl = _conv_np
else:
    try:
        from . import _conv_cy as _impl
    except ImportError:
        _impl = _conv_np

BACKEND = "cython" if _impl is not _conv_np else "numpy"

im2col = _impl.im2col
col2im = _impl.col2im
output_hw = _conv_np.output_hw


def backend_name():
    return BACKEND
