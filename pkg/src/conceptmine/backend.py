"""Kernel backend selection.

Hot inner loops (closure enumeration, order scans, sampling) exist twice:
a numba ``@njit`` implementation and a pure-numpy fallback with identical
semantics.  The active backend is chosen from the ``CONCEPTMINE_BACKEND``
environment variable ("numba" or "numpy"); when unset, numba is used if it
imports.  ``benchmarks/backend_bench.py`` compares the two.
"""

import os

ENV_VAR = "CONCEPTMINE_BACKEND"

try:
    import numba  # noqa: F401

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only on stripped installs
    HAS_NUMBA = False

_VALID = ("numba", "numpy")
_backend = None


def _default_backend():
    env = os.environ.get(ENV_VAR, "").strip().lower()
    if env:
        if env not in _VALID:
            raise ValueError(f"{ENV_VAR} must be one of {_VALID}, got {env!r}")
        if env == "numba" and not HAS_NUMBA:
            raise ValueError(f"{ENV_VAR}=numba but numba is not importable")
        return env
    return "numba" if HAS_NUMBA else "numpy"


def active_backend():
    """Name of the backend used for kernel dispatch right now."""
    global _backend
    if _backend is None:
        _backend = _default_backend()
    return _backend


def set_backend(name):
    """Force a backend ("numba" or "numpy"); returns the previous name."""
    global _backend
    if name not in _VALID:
        raise ValueError(f"backend must be one of {_VALID}, got {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise ValueError("numba backend requested but numba is not importable")
    previous = active_backend()
    _backend = name
    return previous
