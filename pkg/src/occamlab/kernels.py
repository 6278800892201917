"""Kernel backend selection.

The Cython extension is used when it has been built; otherwise, or when
``OCCAMLAB_PURE_PYTHON=1`` is set, the numpy reference implementations run.
"""

import os

from . import _kernels_py

if os.environ.get("OCCAMLAB_PURE_PYTHON") == "1":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl
        BACKEND = "compiled"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

threshold_layer = _impl.threshold_layer
vc_dimension = _impl.vc_dimension
max_overlap = _impl.max_overlap
