"""Kernel backend selection.

The compiled extension is preferred; set ``STAGSEARCH_BACKEND=python`` to
force the numpy fallback. Both backends expose ``apply_pairs``,
``walk_step`` and ``evolve_marked`` with identical semantics.
"""

from __future__ import annotations

import importlib
import os

from . import _kernels_py


def load(name: str):
    """Return the kernel module for ``name`` ("cython" or "python")."""
    if name == "python":
        return _kernels_py
    if name == "cython":
        return importlib.import_module("stagsearch._kernels")
    raise ValueError(f"unknown kernel backend {name!r}")


def available() -> list[str]:
    names = ["python"]
    try:
        load("cython")
    except ImportError:
        pass
    else:
        names.insert(0, "cython")
    return names


def _select():
    wanted = os.environ.get("STAGSEARCH_BACKEND", "").strip().lower()
    if wanted:
        return load(wanted)
    try:
        return load("cython")
    except ImportError:
        return _kernels_py


backend = _select()
BACKEND = backend.NAME
