"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``SHIMQUOT_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
fp_affine_count = _kernels_py.fp_affine_count
square_sieve = _kernels_py.square_sieve

if os.environ.get("SHIMQUOT_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels  # type: ignore[attr-defined]
    except ImportError:
        pass
    else:
        BACKEND = "cython"
        fp_affine_count = _kernels.fp_affine_count
        square_sieve = _kernels.square_sieve

# Sieve moduli for the height search; products of small prime powers.
SIEVE_MODULI = (64, 63, 65, 11, 17, 19, 23, 29, 31, 37, 41, 43)

__all__ = ["BACKEND", "SIEVE_MODULI", "fp_affine_count", "square_sieve"]
