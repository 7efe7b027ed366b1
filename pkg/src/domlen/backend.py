"""Kernel backend selection.

Two interchangeable kernel sets exist: numba-compiled loops and a pure
numpy fallback. ``DOMLEN_BACKEND=numpy`` forces the fallback,
``DOMLEN_BACKEND=numba`` requires the compiler; when unset, numba is used
if it imports and numpy otherwise. ``use()`` switches at runtime, which
the equality tests and the backend benchmark rely on.
"""

import logging
import os

from . import kernels_numpy

logger = logging.getLogger(__name__)

_BACKENDS = {"numpy": kernels_numpy}

try:
    from . import kernels_numba
    _BACKENDS["numba"] = kernels_numba
except ImportError:
    logger.warning("numba unavailable; falling back to pure-numpy kernels")

_ENV_VAR = "DOMLEN_BACKEND"


def available():
    return tuple(sorted(_BACKENDS))


def _initial():
    name = os.environ.get(_ENV_VAR, "").strip().lower()
    if not name:
        return "numba" if "numba" in _BACKENDS else "numpy"
    if name not in ("numba", "numpy"):
        raise ValueError(f"{_ENV_VAR} must be 'numba' or 'numpy', got {name!r}")
    if name not in _BACKENDS:
        raise RuntimeError(f"{_ENV_VAR}={name} requested but numba is not importable")
    return name


_active = _initial()


def use(name: str) -> None:
    """Select the kernel backend by name ('numba' or 'numpy')."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; available: {available()}")
    _active = name


def active() -> str:
    return _active


def kernels():
    """Module holding the currently selected kernel implementations."""
    return _BACKENDS[_active]
