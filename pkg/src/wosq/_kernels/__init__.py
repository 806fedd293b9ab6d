"""Kernel backend selection.

The accelerated numba backend is the default; set ``WOSQ_KERNELS=numpy`` to
force the pure-numpy fallback (also used automatically when numba is not
importable).  Both backends expose the same two entry points, ``walk_batch``
and ``indicator_batch``.
"""

import os
import warnings

BACKEND_ENV = "WOSQ_KERNELS"


def get_backend(name=None):
    """Load a kernel backend module by name ("numba" or "numpy")."""
    if name is None:
        name = os.environ.get(BACKEND_ENV, "numba").strip().lower()
    if name == "numpy":
        from . import numpy_backend
        return numpy_backend
    if name == "numba":
        from . import numba_backend
        return numba_backend
    raise ValueError(f"unknown kernel backend {name!r}")


try:
    _backend = get_backend()
except ImportError:
    warnings.warn("numba is unavailable; using the pure-numpy kernel fallback")
    _backend = get_backend("numpy")

backend_name = _backend.name
walk_batch = _backend.walk_batch
indicator_batch = _backend.indicator_batch
