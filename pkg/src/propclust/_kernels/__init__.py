"""Hot audit kernels with two interchangeable backends.

The numba backend JIT-compiles the enumeration loops; the numpy backend is a
vectorized fallback with identical semantics (same scan order, same
tie-breaking, bit-identical results).  Selection happens once at import via
the PROPCLUST_KERNELS environment variable:

    PROPCLUST_KERNELS=numba   force numba (ImportError if unavailable)
    PROPCLUST_KERNELS=numpy   force the pure-numpy fallback
    unset / auto              numba when importable, else numpy
"""

import os

from . import numpy_impl

_FLAG = os.environ.get("PROPCLUST_KERNELS", "auto").strip().lower()

if _FLAG == "numpy":
    _impl = numpy_impl
    BACKEND = "numpy"
elif _FLAG in ("", "auto", "numba"):
    try:
        from . import numba_impl as _impl
        BACKEND = "numba"
    except ImportError:
        if _FLAG == "numba":
            raise
        _impl = numpy_impl
        BACKEND = "numpy"
else:
    raise RuntimeError(
        f"PROPCLUST_KERNELS={_FLAG!r} not understood; use 'numba', 'numpy' or 'auto'"
    )

alpha_scan = _impl.alpha_scan
qcore_scan = _impl.qcore_scan
pjr_scan = _impl.pjr_scan
