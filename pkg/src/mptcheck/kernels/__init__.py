"""Hot graph kernels: a compiled extension when available, else pure Python.

Set ``MPTCHECK_PURE_PYTHON=1`` to force the fallback.  Both implementations
take ``array('i')`` inputs and return identical results.
"""

from __future__ import annotations

import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if os.environ.get("MPTCHECK_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
        BACKEND = "compiled"
    except ImportError:
        _impl = _pykernels

scc = _impl.scc
lasso_search = _impl.lasso_search
direct_simulation = _impl.direct_simulation

__all__ = ["BACKEND", "scc", "lasso_search", "direct_simulation"]
