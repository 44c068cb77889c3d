"""Probabilities of histories, actualization, and the quantum die.

The probability of a history relative to the whole sample space is its
trace divided by the dimension. Conditioned on its first event it is the
trace itself, since an elementary projector has unit trace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .amplitude import trace_via_amplitudes
from .errors import (
    AlternativeEndpoint,
    DimensionOutOfRange,
    ForbiddenHistory,
    IndexOutOfRange,
    InternalConsistencyError,
    NotUnitary,
)
from .lang import EventRef, HistoryExpr, endpoints, has_elementary_endpoints, seq
from .projector import gamma_of
from .rays import MAX_DIMENSION, EventSpace, basis_ray, is_unitary, adjoint

FORBIDDEN_TOL = 1e-12
CROSS_CHECK_TOL = 1e-10
UPPER_SLACK = 1e-9
LOWER_SLACK = 1e-12


@dataclass(frozen=True)
class ProbabilityResult:
    """A probability with its raw ratio.

    ``value`` is ``numerator / denominator`` clamped to ``[0, 1]``.
    ``amplitude_value`` holds the same probability computed from amplitudes
    when that route applies, else ``None``.
    """

    value: float
    kind: str
    numerator: float
    denominator: float
    amplitude_value: float | None = None
    warnings: tuple = field(default=())

    @property
    def raw(self) -> float:
        return self.numerator / self.denominator

    @property
    def discrepancy(self) -> float | None:
        if self.amplitude_value is None:
            return None
        return abs(self.raw - self.amplitude_value)


def _clamp(x: float) -> float:
    if x < -LOWER_SLACK or x > 1 + UPPER_SLACK:
        raise InternalConsistencyError(f"probability {x!r} outside [0, 1]")
    return min(max(x, 0.0), 1.0)


def _cross_check(h, space, projector_value, scale):
    if not has_elementary_endpoints(h):
        return None
    amp = trace_via_amplitudes(h, space) * scale
    if abs(amp - projector_value) > CROSS_CHECK_TOL:
        raise InternalConsistencyError(
            f"projector ({projector_value!r}) and amplitude ({amp!r}) results differ for {h}"
        )
    return amp


def absolute_probability(h: HistoryExpr, space: EventSpace, strict: bool = True) -> ProbabilityResult:
    """``tr(Gamma) / N``, cross-checked against ``|A|^2 / N``."""
    op = gamma_of(h, space, strict)
    tr = op.trace
    if abs(tr.imag) > UPPER_SLACK:
        raise InternalConsistencyError(f"trace of history operator has imaginary part {tr.imag!r}")
    n = space.dimension
    raw = tr.real / n
    amp = _cross_check(h, space, raw, 1.0 / n)
    return ProbabilityResult(_clamp(raw), "absolute", tr.real, float(n), amp)


def conditional_probability(h: HistoryExpr, space: EventSpace, strict: bool = True) -> ProbabilityResult:
    """Probability of ``h`` given that its first event occurred.

    Stored as ``p(h and first) / p(first)`` with both sides relative to the
    full sample space; the ratio equals the trace of the history operator.
    """
    first, _ = endpoints(h)
    if not isinstance(first, EventRef):
        raise AlternativeEndpoint(f"history {h} does not begin at a single event")
    op = gamma_of(h, space, strict)
    n = space.dimension
    numerator = op.trace.real / n
    denominator = float(np.trace(space.projector(first.name)).real) / n
    amp = _cross_check(h, space, numerator / denominator, 1.0)
    return ProbabilityResult(_clamp(numerator / denominator), "conditional", numerator, denominator, amp)


def actualize(h: HistoryExpr, space: EventSpace, strict: bool = True) -> np.ndarray:
    """Normalized history operator ``Gamma / tr(Gamma)``.

    For a history ending at a single event this is that event's projector.

    Raises
    ------
    ForbiddenHistory
        If the history has (numerically) zero probability.
    """
    _, last = endpoints(h)
    if not isinstance(last, EventRef):
        raise AlternativeEndpoint(f"history {h} does not end at a single event")
    op = gamma_of(h, space, strict)
    tr = op.trace.real
    if tr <= FORBIDDEN_TOL:
        raise ForbiddenHistory(f"history {h} has zero probability; cannot condition on it")
    psi = op.gamma / tr
    if np.max(np.abs(psi - space.projector(last.name))) > CROSS_CHECK_TOL:
        raise InternalConsistencyError(f"actualized operator of {h} is not the final projector")
    psi.setflags(write=False)
    return psi


def memory_loss_check(a: str, b: str, c: str, space: EventSpace) -> tuple[float, float]:
    """``(p(c | a then b), p(c | b))``; the two agree for any a."""
    ab = gamma_of(seq(a, b), space)
    denominator = ab.trace.real
    if denominator <= FORBIDDEN_TOL:
        raise ForbiddenHistory(f"history {a} & {b} has zero probability")
    abc = gamma_of(seq(a, b, c), space)
    p_after_ab = abc.trace.real / denominator
    p_after_b = gamma_of(seq(b, c), space).trace.real
    return p_after_ab, p_after_b


@dataclass(frozen=True)
class QuantumDie:
    """An N-level system whose faces ``f1 .. fN`` are the standard basis."""

    space: EventSpace

    @property
    def faces(self) -> int:
        return self.space.dimension

    def face(self, i: int) -> str:
        if not 1 <= i <= self.faces:
            raise IndexOutOfRange(f"face {i} outside 1..{self.faces}")
        return f"f{i}"

    def face_projector(self, i: int) -> np.ndarray:
        return self.space.projector(self.face(i))


def make_die(n: int) -> QuantumDie:
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or not 2 <= n <= MAX_DIMENSION:
        raise DimensionOutOfRange(f"a die needs 2..{MAX_DIMENSION} faces, got {n!r}")
    n = int(n)
    return QuantumDie(EventSpace(n, {f"f{k + 1}": basis_ray(n, k) for k in range(n)}))


def rotated_face_probability(d: QuantumDie, i: int, u, j: int) -> float:
    """Probability of the rotated face ``U f_j`` given that face ``f_i`` came out.

    Faces are numbered from 1.
    """
    p_i = d.face_projector(i)
    p_j = d.face_projector(j)
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != p_i.shape or not is_unitary(u):
        raise NotUnitary("die rotation must be a unitary of the die's dimension")
    rotated = u @ p_j @ adjoint(u)
    value = np.trace(rotated @ p_i @ rotated) / np.trace(p_i)
    return float(value.real)
