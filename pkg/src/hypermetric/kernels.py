"""Kernel selection: compiled extension when available, numpy fallback.

Set HYPERMETRIC_PURE_PYTHON=1 to force the fallback (used by the benchmark
and by tests that compare the two implementations).
"""

import os

if os.environ.get("HYPERMETRIC_PURE_PYTHON"):
    from . import _speedups_py as impl
else:
    try:
        from . import _speedups as impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _speedups_py as impl

COMPILED = bool(getattr(impl, "COMPILED", False))
polyline_length = impl.polyline_length
