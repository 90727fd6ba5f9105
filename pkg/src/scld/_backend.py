"""Kernel backend selection.

The compiled extension is used when it was built and the alphabet fits in
a 64-bit mask; otherwise the pure-Python kernels run. ``SCLD_PURE_PYTHON=1``
forces the fallback at import time.
"""
from __future__ import annotations

import os
from contextlib import contextmanager

import numpy as np

from . import _kernels_py as _py
from .code import count_coalitions

try:
    from . import _kernels as _ext
except ImportError:  # extension not built
    _ext = None

if os.environ.get("SCLD_PURE_PYTHON", "") not in ("", "0"):
    _ext = None

MAX_EXT_Q = 64


def _bits(code) -> np.ndarray:
    cached = code.__dict__.get("_onehot")
    if cached is None:
        cached = _ext.onehot(np.ascontiguousarray(code.array))
        code.__dict__["_onehot"] = cached
    return cached


class _Dispatch:
    def __init__(self):
        self.prefer = "cython" if _ext is not None else "python"

    @property
    def name(self) -> str:
        return self.prefer

    def _use_ext(self, q: int) -> bool:
        return self.prefer == "cython" and _ext is not None and q <= MAX_EXT_Q

    def residual(self, code, d) -> np.ndarray:
        if self._use_ext(code.q):
            return _ext.residual(_bits(code), np.ascontiguousarray(d.masks))
        return _py.residual(code, d)

    def coalition_scan(self, code, t: int, exact: bool = False):
        if self._use_ext(code.q):
            total = count_coalitions(code.M, t, exact)
            return _ext.coalition_scan(_bits(code), t, exact, total)
        return _py.coalition_scan(code, t, exact)

    def match_subsets(self, code, candidates, t: int, d, first_only: bool = True):
        if self._use_ext(code.q):
            cand = np.asarray(candidates, dtype=np.int64)
            return _ext.match_subsets(_bits(code), cand, t, np.ascontiguousarray(d.masks), first_only)
        return _py.match_subsets(code, list(candidates), t, d, first_only)


kernels = _Dispatch()
HAVE_EXTENSION = _ext is not None


@contextmanager
def use_backend(name: str):
    """Temporarily force ``"python"`` or ``"cython"`` kernels."""
    if name not in ("python", "cython"):
        raise ValueError(name)
    if name == "cython" and _ext is None:
        raise RuntimeError("compiled extension not available")
    old = kernels.prefer
    kernels.prefer = name
    try:
        yield kernels
    finally:
        kernels.prefer = old
