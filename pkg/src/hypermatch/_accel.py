"""Numba toggle.

Set ``HYPERMATCH_NO_NUMBA=1`` to run every kernel through its pure
numpy/Python path. The flag is read once at import time.
"""

import os

_DISABLED = os.environ.get("HYPERMATCH_NO_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

try:
    import numba as _numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _numba = None

USE_NUMBA = _numba is not None and not _DISABLED


def njit(fn):
    """``numba.njit(cache=True)`` when available, else a lazily-failing stub.

    The undecorated function is always reachable as ``fn.py_func`` so the
    fallback path and the compiled path share one source.
    """
    if _numba is None:
        fn.py_func = fn
        return fn
    return _numba.njit(cache=True)(fn)
