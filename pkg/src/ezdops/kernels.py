"""Backend selection for the hot kernels.

The compiled module ``_ckernels`` is used when it was built; otherwise the
pure-Python twins in ``_pykernels`` are used.  Setting ``EZDOPS_PURE_PYTHON=1``
forces the fallback.
"""

import os

from . import _pykernels

if os.environ.get("EZDOPS_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
else:
    try:
        from . import _ckernels as _impl
    except ImportError:
        _impl = _pykernels

BACKEND = "cython" if _impl is not _pykernels else "python"

mul_terms = _impl.mul_terms
rref_int = _impl.rref_int

__all__ = ["BACKEND", "mul_terms", "rref_int"]
