"""Optional numba acceleration.

Kernels are written once as plain Python over numpy arrays and wrapped with
``jit``. Setting ``PATHWCA_DISABLE_NUMBA=1`` (or running without numba
installed) keeps the pure-Python/numpy path.
"""
import os

_disabled = os.environ.get("PATHWCA_DISABLE_NUMBA", "").strip().lower() in ("1", "true", "yes")

try:
    if _disabled:
        raise ImportError
    import numba

    HAS_NUMBA = True
except ImportError:
    numba = None
    HAS_NUMBA = False

JIT_OPTIONS = {"nopython": True, "nogil": True, "cache": True}


def jit(func):
    if HAS_NUMBA:
        return numba.jit(**JIT_OPTIONS)(func)
    return func


def backend():
    return "numba" if HAS_NUMBA else "python"
