"""Kernel backend selection: compiled extension when built, numpy otherwise.

CONEKIT_KERNEL=python forces the fallback (used by the benchmark and by
tests that compare the two implementations).
"""

import os

from . import _kernels_py

if os.environ.get("CONEKIT_KERNEL") == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl

        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

density_product = _impl.density_product


def kernel_backend() -> str:
    return BACKEND
