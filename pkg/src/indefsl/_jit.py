"""Kernel backend selection: numba-compiled or pure Python.

The hot inner loops (adaptive Runge-Kutta propagation of the fundamental
system and of the Weyl log-derivative) live in :mod:`indefsl._kernels` as
plain Python functions and are compiled with numba when available.

Environment flag ``INDEFSL_JIT``:

* ``auto`` (default) -- compile with numba if importable, else fall back
  to the interpreted versions with a warning;
* ``0`` -- force the pure-Python fallback;
* ``1`` -- require numba (raises ImportError if missing).

When compiled, each kernel keeps its interpreted twin reachable as
``kernel.py_func`` (a numba dispatcher attribute); the benchmark suite and
the backend-equivalence tests compare the two paths through it.
"""

import os
import warnings

_MODE = os.environ.get("INDEFSL_JIT", "auto").strip().lower()


def _resolve():
    if _MODE in ("0", "off", "false", "no"):
        return None
    try:
        import numba
    except ImportError:
        if _MODE in ("1", "on", "true", "yes"):
            raise
        warnings.warn("numba is not importable; falling back to pure-Python "
                      "kernels (expect large slowdowns)", stacklevel=2)
        return None
    return numba


_numba = _resolve()

JIT_ENABLED = _numba is not None


def njit_kernel(func):
    """Compile ``func`` nopython/nogil/cached, or return it unchanged."""
    if _numba is None:
        return func
    return _numba.njit(cache=True, nogil=True)(func)
