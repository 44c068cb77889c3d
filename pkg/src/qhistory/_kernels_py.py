"""Pure-Python kernels. Reference semantics for ``_kernels.pyx``.

Arithmetic order matches the compiled version: path products are formed
left to right and sums are accumulated sequentially in path order.
"""

import itertools

import numpy as np


def sandwich(stack):
    """``Q_n ... Q_2 Q_1 Q_2 ... Q_n`` for ``stack = [Q_1, ..., Q_n]``."""
    stack = np.asarray(stack, dtype=np.complex128)
    g = stack[0].copy()
    for q in stack[1:]:
        g = q @ g @ q
    return g


def slot_path_amplitudes(gram, slot_idx, slot_offsets):
    """Amplitude of every path through the given slots.

    ``gram[i, j]`` is the bracket between events ``i`` and ``j``; slot ``k``
    holds event indices ``slot_idx[slot_offsets[k]:slot_offsets[k + 1]]``.
    """
    g = gram.tolist()
    offsets = list(slot_offsets)
    idx = list(slot_idx)
    groups = [idx[offsets[k]:offsets[k + 1]] for k in range(len(offsets) - 1)]
    out = []
    for path in itertools.product(*groups):
        amp = 1 + 0j
        for i, j in zip(path, path[1:]):
            amp = amp * g[i][j]
        out.append(amp)
    return np.array(out, dtype=np.complex128)


def ragged_path_amplitudes(gram, flat_idx, offsets):
    """Amplitudes of explicit paths ``flat_idx[offsets[p]:offsets[p + 1]]``."""
    g = gram.tolist()
    idx = list(flat_idx)
    off = list(offsets)
    out = []
    for p in range(len(off) - 1):
        path = idx[off[p]:off[p + 1]]
        amp = 1 + 0j
        for i, j in zip(path, path[1:]):
            amp = amp * g[i][j]
        out.append(amp)
    return np.array(out, dtype=np.complex128)


def ordered_sum(values):
    total = 0j
    for v in np.asarray(values, dtype=np.complex128).tolist():
        total = total + v
    return total
