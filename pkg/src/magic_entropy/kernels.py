"""Backend selection for the packed kernels.

The compiled extension is used when it imports; ``MAGIC_ENTROPY_PURE=1``
forces the numpy fallback.  ``BACKEND`` names the active choice.
"""

import os

from . import _kernels_py

if os.environ.get("MAGIC_ENTROPY_PURE", "") not in ("", "0"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

GATE_CODES = _kernels_py.GATE_CODES
apply_gate = _impl.apply_gate
rowmul = _impl.rowmul
symp_row = _impl.symp_row
product_rows = _impl.product_rows
gf2_rref = _impl.gf2_rref
phased_rref = _impl.phased_rref

__all__ = [
    "BACKEND",
    "GATE_CODES",
    "apply_gate",
    "rowmul",
    "symp_row",
    "product_rows",
    "gf2_rref",
    "phased_rref",
]
