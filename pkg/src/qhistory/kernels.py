"""Kernel backend selection.

The compiled extension is used when it is importable. Setting
``QHISTORY_PURE_PYTHON=1`` forces the pure-Python fallback.

The compiled sandwich uses a naive triple loop, which beats the BLAS call
only for small operators; larger ones go through numpy either way.
"""

import os

from . import _kernels_py

if os.environ.get("QHISTORY_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl

    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as _impl

        BACKEND = "python"

# crossover measured with benchmarks/bench_kernels.py
SANDWICH_COMPILED_MAX_DIM = 10


def sandwich(stack):
    if stack.shape[-1] > SANDWICH_COMPILED_MAX_DIM:
        return _kernels_py.sandwich(stack)
    return _impl.sandwich(stack)


slot_path_amplitudes = _impl.slot_path_amplitudes
ragged_path_amplitudes = _impl.ragged_path_amplitudes
ordered_sum = _impl.ordered_sum

__all__ = [
    "BACKEND",
    "sandwich",
    "slot_path_amplitudes",
    "ragged_path_amplitudes",
    "ordered_sum",
]
