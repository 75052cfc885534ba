"""Backend selection for the hot kernels.

The kernels in :mod:`cssets.kernels` exist twice: a numba ``@njit`` version
and a pure-numpy version.  Which one the public dispatchers use is decided
once at import from the ``CSSETS_BACKEND`` environment variable
(``numba`` or ``numpy``), and can be switched at runtime with
:func:`use_backend` (tests and the benchmark do this).
"""
from __future__ import annotations

import contextlib
import os

try:
    import numba
    from numba import njit as _njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    numba = None
    _njit = None
    HAS_NUMBA = False

BACKENDS = ("numba", "numpy")

_requested = os.environ.get("CSSETS_BACKEND", "numba").strip().lower() or "numba"
if _requested not in BACKENDS:
    raise ImportError(f"CSSETS_BACKEND must be one of {BACKENDS}, got {_requested!r}")

_active = _requested if (_requested == "numpy" or HAS_NUMBA) else "numpy"


def jit(fn):
    """``numba.njit(cache=True)`` when numba is importable, identity otherwise."""
    if HAS_NUMBA:
        return _njit(cache=True, nogil=True)(fn)
    return fn


def backend() -> str:
    return _active


def set_backend(name: str) -> None:
    global _active
    if name not in BACKENDS:
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and not HAS_NUMBA:
        raise RuntimeError("numba backend requested but numba is not installed")
    _active = name


@contextlib.contextmanager
def use_backend(name: str):
    previous = _active
    set_backend(name)
    try:
        yield
    finally:
        set_backend(previous)


def available_backends() -> tuple[str, ...]:
    return BACKENDS if HAS_NUMBA else ("numpy",)
