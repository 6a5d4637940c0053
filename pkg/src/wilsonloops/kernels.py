"""Kernel selection: compiled extension when built, pure Python otherwise.

Set ``WILSON_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("WILSON_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

reduce_word = _impl.reduce_word
least_rotation = _impl.least_rotation
displacement = _impl.displacement
height_map = _impl.height_map

STEP = _kernels_py.STEP
INVERSE = _kernels_py.INVERSE

__all__ = [
    "BACKEND",
    "STEP",
    "INVERSE",
    "reduce_word",
    "least_rotation",
    "displacement",
    "height_map",
]
