"""Kernel backend selection.

The compiled extension is preferred when it was built; otherwise the
pure-Python twin is used.  Setting the environment variable
``MFCLAB_PURE_PYTHON=1`` before import forces the fallback (useful for
benchmarking and debugging).
"""

import os

if os.environ.get("MFCLAB_PURE_PYTHON") == "1":
    from . import _kernels_py as kernels
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as kernels

BACKEND = kernels.BACKEND_NAME
