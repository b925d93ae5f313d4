"""Backend selection for the stepping kernels.

The compiled module is used when it imports; otherwise the numpy fallback.
Set ``CYCLEWALK_PURE_PYTHON=1`` to force the fallback.
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

if _ckernels is not None and not os.environ.get("CYCLEWALK_PURE_PYTHON"):
    backend = _ckernels
    BACKEND = "cython"
else:
    backend = _pykernels
    BACKEND = "python"


def available_backends():
    out = {"python": _pykernels}
    if _ckernels is not None:
        out["cython"] = _ckernels
    return out
