"""Array kernels for Riemann sums.

The compiled backend is used when it was built; set ``VIRTUALCALC_PURE=1``
to force the NumPy fallback.
"""
import os

import numpy as np

from . import _pykernel

BACKENDS = {"python": _pykernel}
try:
    from . import _ckernel
except ImportError:
    _ckernel = None
else:
    BACKENDS["compiled"] = _ckernel

BACKEND = "python" if os.environ.get("VIRTUALCALC_PURE") or _ckernel is None else "compiled"


def _impl(backend):
    return BACKENDS[backend or BACKEND]


def eval_points(program, xs, backend=None):
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    return _impl(backend).eval_points(program.ops, program.arg1, program.arg2, program.stack, xs)


def riemann_sum(program, xs, zs, backend=None):
    """``(sum, absolute mass, first bad tag index or -1)`` over a tagged partition."""
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    zs = np.ascontiguousarray(zs, dtype=np.float64)
    return _impl(backend).riemann_sum(
        program.ops, program.arg1, program.arg2, program.stack, xs, zs
    )
