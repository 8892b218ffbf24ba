"""Kernel backend selection.

The hot CSR kernels exist twice: a Cython extension (``_ckernels``) and a
pure-numpy fallback (``_kernels_py``).  At import time the compiled module is
preferred; setting the environment variable ``KSPBENCH_BACKEND=python`` (or
``compiled``) overrides the choice.  ``set_backend`` switches at runtime,
which the test suite and the backend benchmark use to compare the two.
"""

import os

from . import _kernels_py as python_kernels

try:
    from . import _ckernels as compiled_kernels
except ImportError:
    compiled_kernels = None

_BACKENDS = {"python": python_kernels}
if compiled_kernels is not None:
    _BACKENDS["compiled"] = compiled_kernels


def _default():
    choice = os.environ.get("KSPBENCH_BACKEND", "").strip().lower()
    if choice:
        if choice not in _BACKENDS:
            raise ImportError(
                f"KSPBENCH_BACKEND={choice!r} unavailable; "
                f"choices: {sorted(_BACKENDS)}"
            )
        return _BACKENDS[choice]
    return compiled_kernels if compiled_kernels is not None else python_kernels


_active = _default()


def kernels():
    """The currently active kernel module."""
    return _active


def active_name():
    return _active.NAME


def available_backends():
    return sorted(_BACKENDS)


def set_backend(name):
    """Switch kernel backend ('python' or 'compiled'); returns the previous name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"unknown backend {name!r}; choices: {sorted(_BACKENDS)}")
    previous = _active.NAME
    _active = _BACKENDS[name]
    return previous
