"""Select the compiled scan kernel when available, else the pure fallback.

Set FIELDLAB_FORCE_PY=1 to force the pure-Python path (used by the
benchmark to compare both implementations).
"""

import os

if os.environ.get("FIELDLAB_FORCE_PY") == "1":
    from . import _zero_scan_py as _impl
else:
    try:
        from . import _zero_scan as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _zero_scan_py as _impl

HAVE_COMPILED = _impl.COMPILED
scan_diagonal_zero = _impl.scan_diagonal_zero


def kernel_name() -> str:
    return "compiled" if HAVE_COMPILED else "pure-python"
