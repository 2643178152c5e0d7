"""Kernel backend selection.

The compiled Cython extension (_kernels) is used when it imported cleanly;
otherwise the numpy fallback (py_kernels) takes over.  FLR4_BACKEND=python
forces the fallback, FLR4_BACKEND=cython makes a missing extension a hard
error.  Both expose the same three functions: resolvent_grid, rk4_affine,
fourier_uniform.
"""

import os

from . import py_kernels


def _select():
    forced = os.environ.get("FLR4_BACKEND", "auto").strip().lower()
    if forced == "python":
        return py_kernels
    try:
        from . import _kernels
        return _kernels
    except ImportError:
        if forced == "cython":
            raise
        return py_kernels


_impl = _select()

BACKEND = _impl.NAME

resolvent_grid = _impl.resolvent_grid
rk4_affine = _impl.rk4_affine
fourier_uniform = _impl.fourier_uniform


def available_backends():
    """Names of the kernel implementations importable in this process."""
    names = ["python"]
    try:
        from . import _kernels  # noqa: F401
        names.insert(0, "cython")
    except ImportError:
        pass
    return names


def get_impl(name):
    """Fetch a specific kernel module ('cython' or 'python')."""
    if name == "python":
        return py_kernels
    if name == "cython":
        from . import _kernels
        return _kernels
    raise ValueError(f"unknown backend {name!r}")
