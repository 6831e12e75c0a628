"""Kernel selection.

The compiled extension is used when importable; ``TOTIENT_STRATA_PURE=1``
forces the numpy fallback.
"""

import os

from . import _pykernels

kernels = _pykernels
NAME = "numpy"

if os.environ.get("TOTIENT_STRATA_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        kernels = _kernels
        NAME = "cython"

IMPLEMENTATIONS = {"numpy": _pykernels}
if NAME == "cython":
    IMPLEMENTATIONS["cython"] = kernels
