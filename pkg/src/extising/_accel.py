"""Numba switch.

Kernels are decorated with :func:`njit`.  Setting ``EXTISING_DISABLE_NUMBA=1``
(or running without numba installed) selects the pure-numpy fallbacks instead.
"""
import os

try:
    import numba
except ImportError:  # pragma: no cover
    numba = None

USE_NUMBA = numba is not None and os.environ.get("EXTISING_DISABLE_NUMBA", "0") not in ("1", "true", "yes")


def njit(fn):
    if not USE_NUMBA:
        return fn
    return numba.njit(cache=True, nogil=True)(fn)
