"""Backend selection for the series kernels.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
pure-Python module is used. Setting ``QTJINV_PURE=1`` forces the fallback.
"""

import os

from . import _pykernels

if os.environ.get("QTJINV_PURE", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"

mul_trunc = _impl.mul_trunc
inv_trunc = _impl.inv_trunc
axpy = _impl.axpy

__all__ = ["BACKEND", "mul_trunc", "inv_trunc", "axpy"]
