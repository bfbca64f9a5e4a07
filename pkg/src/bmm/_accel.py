"""Optional numba acceleration.

Set ``BMM_DISABLE_NUMBA=1`` in the environment before import to force the
pure-numpy code paths.  :func:`set_backend` switches at runtime, which the
tests use to compare both paths in one process.
"""
import os

_FALSY = {"", "0", "false", "no", "off"}

try:
    import numba

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    numba = None
    HAVE_NUMBA = False

DISABLED_BY_ENV = os.environ.get("BMM_DISABLE_NUMBA", "").strip().lower() not in _FALSY

_backend = "numba" if (HAVE_NUMBA and not DISABLED_BY_ENV) else "numpy"


def njit(*args, **kwargs):
    """``numba.njit`` when numba is importable, otherwise a no-op decorator."""
    if HAVE_NUMBA:
        return numba.njit(*args, **kwargs)
    if len(args) == 1 and callable(args[0]) and not kwargs:
        return args[0]

    def wrapper(f):
        return f

    return wrapper


def get_backend():
    """Return the active kernel backend, ``"numba"`` or ``"numpy"``."""
    return _backend


def set_backend(name):
    """Select the kernel backend; returns the previous one."""
    global _backend
    if name not in ("numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAVE_NUMBA:
        raise RuntimeError("numba is not installed")
    previous, _backend = _backend, name
    return previous
