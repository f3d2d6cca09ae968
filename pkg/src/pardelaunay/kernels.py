"""Select the circumsquare kernel implementation at import time.

The compiled extension is used when it is importable, unless the
environment variable ``PARDELAUNAY_PURE_PYTHON`` is set to a non-empty value
other than ``0``.  ``BACKEND`` names the implementation in use.
"""

import os

from . import _fallback

if os.environ.get("PARDELAUNAY_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        _impl = _fallback

BACKEND = "compiled" if _impl is not _fallback else "numpy"

empty_squares = _impl.empty_squares
boundary_quadruples = _impl.boundary_quadruples
