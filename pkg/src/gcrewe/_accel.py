"""
Numba switch.

Set ``GCREWE_DISABLE_NUMBA=1`` before import to route every hot kernel through
its pure numpy/scipy path instead of the compiled one.
"""
import os

try:
    import numba
    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    numba = None
    NUMBA_AVAILABLE = False

ENABLE_NUMBA = NUMBA_AVAILABLE and os.environ.get("GCREWE_DISABLE_NUMBA", "0") not in ("1", "true", "yes")
CACHE_NUMBA = True


def njit(func):
    """Compile ``func`` in nopython mode when numba is installed.

    The decorated function stays callable as plain Python if numba is missing,
    which keeps the module importable; dispatch code never calls it then.
    """
    if NUMBA_AVAILABLE:
        return numba.njit(cache=CACHE_NUMBA)(func)
    return func


def use_numba() -> bool:
    return ENABLE_NUMBA


def set_numba(enabled: bool) -> None:
    """Flip the backend at runtime (benchmarks and backend-equivalence tests)."""
    global ENABLE_NUMBA
    ENABLE_NUMBA = bool(enabled) and NUMBA_AVAILABLE
