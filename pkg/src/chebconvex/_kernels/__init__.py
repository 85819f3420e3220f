"""Float kernels, compiled when available.

The Cython extension is used if it was built; otherwise (or when
``CHEBCONVEX_PURE_PYTHON=1``) the numpy fallback with identical semantics
is selected.
"""

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("CHEBCONVEX_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels

det_with_bound = _impl.det_with_bound
batch_det_with_bound = _impl.batch_det_with_bound
newton_table = _impl.newton_table

__all__ = ["BACKEND", "det_with_bound", "batch_det_with_bound", "newton_table"]
