"""Optional numba acceleration.

Hot kernels are written twice: a loop version compiled with ``numba.njit``
and a vectorized numpy version.  Set ``QFRIC_DISABLE_NUMBA=1`` to force the
numpy path (also used automatically when numba is not importable).
"""
import os

_flag = os.environ.get("QFRIC_DISABLE_NUMBA", "").strip().lower()
DISABLED_BY_ENV = _flag in ("1", "true", "yes", "on")

try:
    import numba as _numba
except ImportError:  # pragma: no cover - depends on the environment
    _numba = None

HAVE_NUMBA = _numba is not None
USE_NUMBA = HAVE_NUMBA and not DISABLED_BY_ENV


def njit(*args, **kwargs):
    """``numba.njit`` when numba is installed, otherwise a no-op decorator.

    Compiled even when the env flag disables numba so that the benchmark and
    the equivalence tests can still reach both paths.
    """
    if HAVE_NUMBA:
        return _numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]
    return lambda f: f
