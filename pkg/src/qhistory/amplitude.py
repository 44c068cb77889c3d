"""Amplitude representation of histories.

The amplitude of an alternative-free path is the product of brackets
between consecutive events; a history's amplitude sums that over every
path it expands to. Sums run sequentially in expansion order so results
are reproducible bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import AlternativeEndpoint, InternalConsistencyError
from .lang import (
    ElementaryPath,
    EventRef,
    HistoryExpr,
    endpoints,
    event_names,
    expand_paths,
    is_slot_form,
    reverse,
    slots,
)
from .rays import EventSpace

IMAGINARY_TOL = 1e-10


@dataclass(frozen=True)
class Amplitude:
    value: complex
    history: HistoryExpr


@dataclass(frozen=True)
class ClosedLoop:
    """A forward path followed by a path back to its start."""

    forward: ElementaryPath
    backward: ElementaryPath
    amplitude: complex

    @property
    def direct(self) -> bool:
        return self.backward == self.forward.reversed()

    @property
    def kind(self) -> str:
        return "direct" if self.direct else "interference"

    @property
    def events(self) -> tuple:
        return self.forward.events + self.backward.events[1:]

    def __str__(self):
        return "·".join(self.events)


def _index(names):
    return {n: i for i, n in enumerate(names)}


def _path_amplitudes(paths, space):
    names = sorted({e for p in paths for e in p.events})
    pos = _index(names)
    flat = np.fromiter((pos[e] for p in paths for e in p.events), dtype=np.int64)
    offsets = np.zeros(len(paths) + 1, dtype=np.int64)
    np.cumsum([len(p) for p in paths], out=offsets[1:])
    return kernels.ragged_path_amplitudes(space.gram(names), flat, offsets)


def path_amplitude(p: ElementaryPath, space: EventSpace) -> complex:
    """Product of ``<e_i|e_{i+1}>`` along the path; 1 for a single event."""
    if not isinstance(p, ElementaryPath):
        p = ElementaryPath(p)
    return complex(_path_amplitudes([p], space)[0])


def path_amplitudes(h: HistoryExpr, space: EventSpace) -> np.ndarray:
    """Amplitude of each path of ``h``, in :func:`expand_paths` order."""
    if is_slot_form(h):
        names = event_names(h)
        pos = _index(names)
        groups = []
        for s in slots(h):
            groups.append([s.name] if isinstance(s, EventRef) else [b.name for b in s.branches])
        idx = np.array([pos[n] for g in groups for n in g], dtype=np.int64)
        offsets = np.zeros(len(groups) + 1, dtype=np.int64)
        np.cumsum([len(g) for g in groups], out=offsets[1:])
        return kernels.slot_path_amplitudes(space.gram(names), idx, offsets)
    return _path_amplitudes(expand_paths(h), space)


def amplitude_of(h: HistoryExpr, space: EventSpace) -> Amplitude:
    return Amplitude(kernels.ordered_sum(path_amplitudes(h, space)), h)


def _require_elementary_endpoints(h):
    first, last = endpoints(h)
    if not (isinstance(first, EventRef) and isinstance(last, EventRef)):
        raise AlternativeEndpoint(
            f"history {h} has an alternative endpoint; the amplitude trace identity does not apply"
        )


def trace_via_amplitudes(h: HistoryExpr, space: EventSpace) -> float:
    """``A(h) * A(reverse(h))``, the certainty in the amplitude picture.

    Raises
    ------
    AlternativeEndpoint
        If the history starts or ends on an alternative group, where the
        cross terms make this differ from the operator trace.
    """
    _require_elementary_endpoints(h)
    value = amplitude_of(h, space).value * amplitude_of(reverse(h), space).value
    if abs(value.imag) > IMAGINARY_TOL:
        raise InternalConsistencyError(
            f"amplitude product for {h} has imaginary part {value.imag!r}"
        )
    return value.real


def closed_loops(h: HistoryExpr, space: EventSpace) -> list[ClosedLoop]:
    """Every forward path paired with every backward path.

    Loops whose backward leg retraces the forward one are direct; the rest
    carry the interference.
    """
    _require_elementary_endpoints(h)
    back = reverse(h)
    fwd_paths = expand_paths(h)
    back_paths = expand_paths(back)
    fwd_amps = path_amplitudes(h, space).tolist()
    back_amps = path_amplitudes(back, space).tolist()
    return [
        ClosedLoop(fp, bp, fa * ba)
        for fp, fa in zip(fwd_paths, fwd_amps)
        for bp, ba in zip(back_paths, back_amps)
    ]


def loop_totals(loops) -> dict:
    """Sequential sums of loop amplitudes: all, direct and interference."""
    total = direct = interference = 0j
    for loop in loops:
        total += loop.amplitude
        if loop.direct:
            direct += loop.amplitude
        else:
            interference += loop.amplitude
    return {"total": total, "direct": direct, "interference": interference}
