"""Kernel backend selection.

The compiled ``_ckernels`` module is used when it is importable; set
``PIXETENDUE_PURE_PYTHON=1`` to force the numpy fallback.  The thermal
sampler always runs on numpy: its vectorised ``log1p`` is several times
faster than the scalar libm call in the compiled loop (see
``benchmarks/bench_kernels.py``).
"""
import os

from . import _pykernels

BACKEND = "python"
_impl = _pykernels

if not os.environ.get("PIXETENDUE_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass

etendue_sum = _impl.etendue_sum
thermal_counts = _pykernels.thermal_counts
power_sums = _impl.power_sums


def backends():
    """All importable kernel modules keyed by name."""
    found = {"python": _pykernels}
    try:
        from . import _ckernels

        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
