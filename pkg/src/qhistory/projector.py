"""Projector representation of histories.

A history with slot operators ``Q_1 ... Q_n`` (an event's projector, or the
sum of projectors over an alternative group) is represented by the
palindromic product ``Q_n ... Q_2 Q_1 Q_2 ... Q_n``. Its trace is the degree
of certainty of the history.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import (
    AlternativeEndpoint,
    InternalConsistencyError,
    NestedSequenceInSlot,
    NoAlternatives,
    NonOrthogonalAlternatives,
)
from .lang import Alt, ElementaryPath, EventRef, HistoryExpr, expand_paths, endpoints, slots
from .rays import INPUT_TOL, EventSpace

ORTHOGONALITY_TOL = 1e-9
IMAGINARY_TOL = 1e-9


class NonOrthogonalAlternativesWarning(UserWarning):
    pass


@dataclass(frozen=True, eq=False)
class HistoryOperator:
    gamma: np.ndarray
    history: HistoryExpr
    space: EventSpace
    orthogonal_alternatives: bool = True

    @property
    def elementary_endpoints(self) -> bool:
        first, last = endpoints(self.history)
        return isinstance(first, EventRef) and isinstance(last, EventRef)

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.gamma))


@dataclass(frozen=True, eq=False)
class InterferenceSplit:
    direct_terms: tuple  # of (ElementaryPath, ndarray)
    interference: np.ndarray
    total: np.ndarray

    def direct_sum(self) -> np.ndarray:
        return sum((op for _, op in self.direct_terms), np.zeros_like(self.total))


def alternatives_orthogonal(branches, space: EventSpace, tol: float = ORTHOGONALITY_TOL) -> bool:
    names = [b.name for b in branches]
    g = space.gram(names)
    off = g - np.diag(np.diag(g))
    return bool(np.max(np.abs(off), initial=0.0) <= tol)


def slot_operator(e: HistoryExpr, space: EventSpace, strict: bool = True) -> np.ndarray:
    """Operator of a single slot.

    An event maps to its projector and an alternative group to the sum of
    its branch projectors. Groups of non-orthogonal rays raise in strict
    mode and warn otherwise.
    """
    if isinstance(e, EventRef):
        return space.projector(e.name)
    if not isinstance(e, Alt) or not all(isinstance(b, EventRef) for b in e.branches):
        raise NestedSequenceInSlot(f"slot {e} is not an event or an alternative of events")
    ops = [space.projector(b.name) for b in e.branches]
    _check_orthogonal(e, space, strict)
    return np.sum(ops, axis=0)


def _check_orthogonal(e: Alt, space, strict) -> bool:
    if alternatives_orthogonal(e.branches, space):
        return True
    msg = f"alternatives {e} are not mutually orthogonal within {ORTHOGONALITY_TOL}"
    if strict:
        raise NonOrthogonalAlternatives(msg)
    warnings.warn(msg, NonOrthogonalAlternativesWarning, stacklevel=3)
    return False


def gamma_of(h: HistoryExpr, space: EventSpace, strict: bool = True) -> HistoryOperator:
    """History operator of ``h``.

    Parameters
    ----------
    h : HistoryExpr
        An event, or a sequence whose slots are events or alternatives of
        events.
    space : EventSpace
        Resolves event names to rays.
    strict : bool
        Reject alternative groups that are not mutually orthogonal.
    """
    ops = []
    orthogonal = True
    for s in slots(h):
        if isinstance(s, Alt):
            if not all(isinstance(b, EventRef) for b in s.branches):
                raise NestedSequenceInSlot(f"slot {s} is not an event or an alternative of events")
            orthogonal &= _check_orthogonal(s, space, strict)
            ops.append(np.sum([space.projector(b.name) for b in s.branches], axis=0))
        elif isinstance(s, EventRef):
            ops.append(space.projector(s.name))
        else:
            raise NestedSequenceInSlot(f"slot {s} is not an event or an alternative of events")
    gamma = kernels.sandwich(np.stack(ops))
    gamma.setflags(write=False)
    return HistoryOperator(gamma, h, space, orthogonal)


def certainty_of(h: HistoryExpr, space: EventSpace, strict: bool = True) -> float:
    """Degree of certainty: the trace of the history operator.

    For elementary endpoints and orthogonal alternatives the value must lie
    in ``[-1e-12, 1 + 1e-9]``; small negative residue is clamped to zero.
    """
    op = gamma_of(h, space, strict)
    return certainty_from(op)


def certainty_from(op: HistoryOperator) -> float:
    tr = op.trace
    if abs(tr.imag) > IMAGINARY_TOL:
        raise InternalConsistencyError(f"trace of history operator has imaginary part {tr.imag!r}")
    value = tr.real
    if op.elementary_endpoints and op.orthogonal_alternatives:
        if value < -1e-12 or value > 1 + INPUT_TOL:
            raise InternalConsistencyError(f"certainty {value!r} outside [0, 1]")
    return max(value, 0.0)


def interference_split(h: HistoryExpr, space: EventSpace, strict: bool = True) -> InterferenceSplit:
    """Split the history operator into per-path terms plus interference."""
    first, last = endpoints(h)
    if not (isinstance(first, EventRef) and isinstance(last, EventRef)):
        raise AlternativeEndpoint(f"history {h} does not start and end at single events")
    if not any(isinstance(s, Alt) for s in slots(h)):
        raise NoAlternatives(f"history {h} has no alternatives to interfere")
    total = gamma_of(h, space, strict).gamma
    terms = []
    for path in expand_paths(h):
        terms.append((path, gamma_of(path.as_history(), space, strict).gamma))
    direct = np.zeros_like(total)
    for _, op in terms:
        direct = direct + op
    interference = total - direct
    interference.setflags(write=False)
    return InterferenceSplit(tuple(terms), interference, total)


def path_operator(path: ElementaryPath, space: EventSpace) -> np.ndarray:
    return gamma_of(path.as_history(), space).gamma
