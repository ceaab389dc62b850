"""Kernel backend selection.

The compiled extension is used when it imports; set
``HSTBEAM_BACKEND=python`` to force the pure-Python fallback.
"""

import os

from . import _kernels_py

if os.environ.get("HSTBEAM_BACKEND", "").lower() == "python":
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels
    except ImportError:
        kernels = _kernels_py

BACKEND = kernels.BACKEND


def available_backends():
    found = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found["cython"] = _kernels
    return found
