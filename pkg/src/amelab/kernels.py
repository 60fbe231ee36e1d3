"""Hot-loop backend selection.

The compiled ``_ckernels`` extension is used when it imports; otherwise the
numpy fallback in ``_pykernels`` is used. Setting ``AMELAB_KERNELS=python``
forces the fallback.
"""
import importlib
import os

from amelab import _pykernels

_FUNCS = ("comb_sum", "pauli_block", "balanced_multisets")


def load_backend(name):
    """Return the kernel module for ``"cython"`` or ``"python"``."""
    if name == "python":
        return _pykernels
    if name == "cython":
        return importlib.import_module("amelab._ckernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def available_backends():
    names = ["python"]
    try:
        load_backend("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


if os.environ.get("AMELAB_KERNELS", "").lower() == "python":
    _impl, BACKEND = _pykernels, "python"
else:
    try:
        _impl, BACKEND = load_backend("cython"), "cython"
    except ImportError:
        _impl, BACKEND = _pykernels, "python"

comb_sum = _impl.comb_sum
pauli_block = _impl.pauli_block
balanced_multisets = _impl.balanced_multisets

__all__ = ["BACKEND", "available_backends", "load_backend", *_FUNCS]
