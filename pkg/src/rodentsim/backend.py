"""Kernel backend selection.

The hot inner loops (constrained sequence generation, the per-trial
learning loop, sliding-window counts, and window-distance means) exist
twice: a compiled Cython extension (``rodentsim._native``) and a
pure-Python implementation (``rodentsim._pykernels``). Both consume
uniform draws from a :class:`numpy.random.Generator` in the same order
and perform the same IEEE-754 double operations in the same order, so a
given seed produces bit-identical results on either backend.

The compiled backend is used when importable; set ``RODENTSIM_BACKEND``
to ``python`` or ``native`` to force one, or call :func:`set_backend`
at runtime (used by the tests and the benchmark).
"""

from __future__ import annotations

import os

from . import _pykernels

_BACKENDS = {"python": _pykernels}

try:
    from . import _native  # compiled extension, absent on source-only installs
    _BACKENDS["native"] = _native
except ImportError:
    _native = None

_env = os.environ.get("RODENTSIM_BACKEND", "").strip().lower()
if _env:
    if _env not in _BACKENDS:
        raise ImportError(
            f"RODENTSIM_BACKEND={_env!r} requested but that backend is not "
            f"available; choices: {sorted(_BACKENDS)}")
    _active = _env
else:
    _active = "native" if "native" in _BACKENDS else "python"


def kernels():
    """Return the active kernel module."""
    return _BACKENDS[_active]


def active_backend() -> str:
    return _active


def available_backends() -> tuple[str, ...]:
    return tuple(sorted(_BACKENDS))


def set_backend(name: str) -> str:
    """Switch the active backend; returns the previous one."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(
            f"backend {name!r} not available; choices: {sorted(_BACKENDS)}")
    previous = _active
    _active = name
    return previous
