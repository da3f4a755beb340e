"""Backend selection for the term kernels.

The compiled ``_core`` extension is used when it imports; otherwise the
pure-Python ``_core_py`` module is used. Setting ``STABPAR_PURE_PYTHON=1``
forces the fallback. ``use_backend`` switches at runtime (benchmarks, parity
tests); every caller reaches the kernels through ``kernels.active()``.
"""
import importlib
import os

from . import _core_py

__all__ = ["available_backends", "active", "backend_name", "use_backend"]


def _load_compiled():
    try:
        return importlib.import_module("stabpar._core")
    except ImportError:
        return None


_compiled = None if os.environ.get("STABPAR_PURE_PYTHON") else _load_compiled()
_backends = {"python": _core_py}
if _compiled is not None:
    _backends["cython"] = _compiled

_active = _compiled if _compiled is not None else _core_py
_active_name = "cython" if _compiled is not None else "python"


def available_backends():
    return sorted(_backends)


def active():
    return _active


def backend_name():
    return _active_name


def use_backend(name):
    """Switch the kernel backend; returns the previous backend name."""
    global _active, _active_name
    if name not in _backends:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    prev = _active_name
    _active, _active_name = _backends[name], name
    return prev
