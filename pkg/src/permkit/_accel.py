"""Numba acceleration switch.

Hot kernels exist in two flavors: an ``@njit`` scalar loop and a
chunk-vectorized pure-numpy twin.  Set ``PERMKIT_DISABLE_NUMBA=1`` (or any
non-empty value other than "0") to force the numpy path, e.g. on platforms
where numba is unavailable or for benchmarking the two against each other
(``python -m permkit.bench``).
"""

import os

_flag = os.environ.get("PERMKIT_DISABLE_NUMBA", "").strip()
_disabled = _flag not in ("", "0")

if not _disabled:
    try:
        from numba import njit  # noqa: F401

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a hard dep, but be safe
        NUMBA_ENABLED = False
else:
    NUMBA_ENABLED = False


def jit_kernel(func):
    """Compile *func* with njit(cache=True, nogil=True) when numba is active.

    When disabled the undecorated function is returned; callers that need a
    fast path must select the numpy twin instead (see kernels.py).
    """
    if NUMBA_ENABLED:
        from numba import njit

        return njit(cache=True, nogil=True)(func)
    return func
