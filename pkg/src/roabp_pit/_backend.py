"""Kernel backend selection.

The compiled extension is preferred when it imported cleanly; setting
ROABP_PIT_PURE_PYTHON=1 forces the pure-Python fallback (used by the
benchmark and by backend-equivalence tests).
"""

import os

if os.environ.get("ROABP_PIT_PURE_PYTHON") == "1":
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND
gen_points_block = kernels.gen_points_block
roabp_eval_block = kernels.roabp_eval_block
