"""Kernel dispatch.

The numba path is used when numba imports and ``PLATEGAP_DISABLE_NUMBA`` is
unset (or ``0``). Setting it to ``1`` selects the pure numpy path; the flag
is read once at import.
"""
import os

from . import _kernels_numpy as numpy_backend

_NAMES = ("z_scalar", "z_values", "find_root", "stencil13", "trig_abs_max",
          "simplex_linear_max")


def _want_numba():
    flag = os.environ.get("PLATEGAP_DISABLE_NUMBA", "").strip().lower()
    return flag in ("", "0", "false", "no")


numba_backend = None
if _want_numba():
    try:
        from . import _kernels_numba as numba_backend
    except ImportError:  # pragma: no cover - numba is a declared dependency
        numba_backend = None

active = numba_backend if numba_backend is not None else numpy_backend
BACKEND = "numba" if active is numba_backend and numba_backend is not None else "numpy"


def get_backend(name=None):
    """Return the kernel module for ``name`` (``"numba"``/``"numpy"``) or the active one."""
    if name is None:
        return active
    if name == "numpy":
        return numpy_backend
    if name == "numba":
        if numba_backend is None:
            from . import _kernels_numba
            return _kernels_numba
        return numba_backend
    raise ValueError(f"unknown backend {name!r}")


z_scalar = active.z_scalar
z_values = active.z_values
find_root = active.find_root
stencil13 = active.stencil13
trig_abs_max = active.trig_abs_max
simplex_linear_max = active.simplex_linear_max
