"""Pick the elimination kernel at import time.

``novbar._ckernel`` (Cython) covers the trivial-group F_p case; everything
else always runs in Python.  Set ``NOVBAR_PURE=1`` to ignore the compiled
module, e.g. to benchmark or to cross-check the two.
"""
from __future__ import annotations

import os

from . import _pykernel
from ._pykernel import triangularize_flat, triangularize_generic

triangularize_modp = _pykernel.triangularize_modp
BACKEND = "python"

if not os.environ.get("NOVBAR_PURE"):
    try:
        from ._ckernel import triangularize_modp  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

__all__ = ["BACKEND", "triangularize_generic", "triangularize_flat", "triangularize_modp"]
