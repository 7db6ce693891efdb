"""Hot loops behind a single interface.

The compiled extension ``_recur`` is used when it was built; otherwise the
numpy implementation in ``fallback`` is used.  ``DUNKLDISK_BACKEND=python``
forces the fallback.
"""
from __future__ import annotations

import os

from . import fallback

BACKEND = "python"
phi_table = fallback.phi_table
pair_sum = fallback.pair_sum

if os.environ.get("DUNKLDISK_BACKEND", "").lower() not in ("python", "fallback"):
    try:
        from . import _recur
    except ImportError:  # extension not built
        pass
    else:
        BACKEND = "cython"
        phi_table = _recur.phi_table
        pair_sum = _recur.pair_sum

__all__ = ["BACKEND", "phi_table", "pair_sum", "fallback"]
