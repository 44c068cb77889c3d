"""Rays, projectors, rotations and the event-space registry.

All operators are dense ``complex128`` numpy arrays. Arrays handed out by
this module are marked read-only so that values stay immutable once built.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Mapping

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionOutOfRange,
    NormOutOfTolerance,
    NotUnitary,
    UnknownEvent,
    ValidationError,
    ZeroVector,
)

MAX_DIMENSION = 64

# tolerance ladder
EXACT_TOL = 1e-12
INPUT_TOL = 1e-9
RENORMALIZE_TOL = 1e-6


def _frozen(array):
    array = np.array(array, dtype=np.complex128)
    array.setflags(write=False)
    return array


def as_operator(matrix) -> np.ndarray:
    """Validate and return ``matrix`` as a square read-only complex array."""
    m = np.asarray(matrix, dtype=np.complex128)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"operator must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ValidationError("operator has non-finite entries")
    return _frozen(m)


def adjoint(matrix) -> np.ndarray:
    return np.conj(np.asarray(matrix)).T


class Ray:
    """A unit vector standing for the one-dimensional subspace it spans.

    Two rays compare equal when their projectors agree within ``INPUT_TOL``,
    so vectors that differ by a global phase are the same ray.
    """

    __slots__ = ("_vector", "_projector")
    __hash__ = None

    def __init__(self, vector):
        v = np.asarray(vector, dtype=np.complex128)
        if v.ndim != 1 or v.size == 0:
            raise DimensionMismatch("ray components must be a non-empty 1-D sequence")
        self._vector = _frozen(v)
        self._projector = None

    @property
    def vector(self) -> np.ndarray:
        return self._vector

    @property
    def dim(self) -> int:
        return self._vector.shape[0]

    def projector(self) -> np.ndarray:
        if self._projector is None:
            self._projector = _frozen(np.outer(self._vector, np.conj(self._vector)))
        return self._projector

    def __eq__(self, other):
        if not isinstance(other, Ray):
            return NotImplemented
        return same_ray(self, other)

    def __repr__(self):
        comps = ", ".join(f"{z.real:.6g}{z.imag:+.6g}j" for z in self._vector)
        return f"Ray([{comps}])"


def make_ray(components: Iterable) -> Ray:
    """Build a :class:`Ray` from complex components.

    Vectors whose norm is within ``1e-6`` of one are renormalized; any other
    norm is rejected rather than silently rescaled.

    Raises
    ------
    ZeroVector
        If every component is zero.
    NormOutOfTolerance
        If the norm is further than ``1e-6`` from one.
    """
    v = np.asarray(list(components) if not isinstance(components, np.ndarray) else components,
                   dtype=np.complex128)
    if v.ndim != 1 or v.size == 0:
        raise DimensionMismatch("ray components must be a non-empty 1-D sequence")
    if not np.all(np.isfinite(v)):
        raise ValidationError("ray components must be finite")
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ZeroVector("cannot build a ray from the zero vector")
    if abs(norm - 1.0) > RENORMALIZE_TOL:
        raise NormOutOfTolerance(f"vector norm {norm!r} is not within {RENORMALIZE_TOL} of 1")
    return Ray(v / norm)


def normalized_ray(components) -> Ray:
    """Like :func:`make_ray` but rescales any nonzero vector."""
    v = np.asarray(components, dtype=np.complex128)
    norm = float(np.linalg.norm(v))
    if norm == 0.0:
        raise ZeroVector("cannot build a ray from the zero vector")
    return make_ray(v / norm)


def basis_ray(dim: int, index: int) -> Ray:
    """The standard basis ray with a one at 0-based ``index``."""
    v = np.zeros(dim, dtype=np.complex128)
    v[index] = 1.0
    return Ray(v)


def angle_ray(theta: float) -> Ray:
    """2-D ray at angle ``theta`` from the first axis."""
    return make_ray([math.cos(theta), math.sin(theta)])


def projector_of(r: Ray) -> np.ndarray:
    """Rank-1 projector ``|r><r|``, entries ``r_i * conj(r_j)``."""
    return r.projector()


def same_ray(a: Ray, b: Ray, tol: float = INPUT_TOL) -> bool:
    if a.dim != b.dim:
        return False
    return float(np.max(np.abs(a.projector() - b.projector()))) < tol


def rotation_2d(theta: float) -> np.ndarray:
    """Plane rotation ``[[cos, sin], [-sin, cos]]``."""
    if not math.isfinite(theta):
        raise ValidationError("rotation angle must be finite")
    c, s = math.cos(theta), math.sin(theta)
    return _frozen([[c, s], [-s, c]])


def is_unitary(u, tol: float = INPUT_TOL) -> bool:
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        return False
    return float(np.max(np.abs(u @ adjoint(u) - np.eye(u.shape[0])))) < tol


def is_projector(p, tol: float = EXACT_TOL) -> bool:
    p = np.asarray(p)
    if p.ndim != 2 or p.shape[0] != p.shape[1]:
        return False
    hermitian = np.max(np.abs(p - adjoint(p))) < tol
    idempotent = np.max(np.abs(p @ p - p)) < tol
    return bool(hermitian and idempotent)


def conjugate_projector(p, u) -> np.ndarray:
    """Return ``U P U^-1`` for a unitary ``U``.

    The inverse is taken as the adjoint, which is exact for unitaries and is
    why ``U`` is checked first.
    """
    p = np.asarray(p, dtype=np.complex128)
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != p.shape:
        raise DimensionMismatch(f"operator shapes differ: {u.shape} vs {p.shape}")
    if not is_unitary(u):
        raise NotUnitary("conjugating operator is not unitary within 1e-9")
    return _frozen(u @ p @ adjoint(u))


def inner_product(a: Ray, b: Ray) -> complex:
    """Bracket ``<a|b>``, antilinear in ``a``."""
    if a.dim != b.dim:
        raise DimensionMismatch(f"rays of dimension {a.dim} and {b.dim}")
    return complex(np.vdot(a.vector, b.vector))


def trace(m) -> complex:
    m = np.asarray(m)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"trace of non-square operator {m.shape}")
    return complex(np.trace(m))


def check_dimension(dim: int) -> int:
    if isinstance(dim, bool) or not isinstance(dim, (int, np.integer)):
        raise DimensionOutOfRange(f"dimension must be an integer, got {dim!r}")
    if not 1 <= dim <= MAX_DIMENSION:
        raise DimensionOutOfRange(f"dimension {dim} outside 1..{MAX_DIMENSION}")
    return int(dim)


class EventSpace:
    """A ray space of fixed dimension together with its named events.

    Instances are immutable; :meth:`with_event` returns an extended copy.
    """

    def __init__(self, dimension: int, events: Mapping[str, Ray] | None = None):
        self._dimension = check_dimension(dimension)
        self._events: dict[str, Ray] = {}
        for name, ray in (events or {}).items():
            if not isinstance(ray, Ray):
                ray = make_ray(ray)
            if ray.dim != self._dimension:
                raise DimensionMismatch(
                    f"event {name!r} has dimension {ray.dim}, space has {self._dimension}"
                )
            self._events[name] = ray

    @property
    def dimension(self) -> int:
        return self._dimension

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(self._events)

    def __contains__(self, name):
        return name in self._events

    def __len__(self):
        return len(self._events)

    def __iter__(self):
        return iter(self._events)

    def items(self):
        return self._events.items()

    def with_event(self, name: str, ray) -> EventSpace:
        if name in self._events:
            raise ValidationError(f"event {name!r} already registered")
        events = dict(self._events)
        events[name] = ray
        return EventSpace(self._dimension, events)

    def ray(self, name: str) -> Ray:
        try:
            return self._events[name]
        except KeyError:
            raise UnknownEvent(f"unknown event {name!r}") from None

    def projector(self, name: str) -> np.ndarray:
        return self.ray(name).projector()

    def identity(self) -> np.ndarray:
        return _frozen(np.eye(self._dimension))

    def gram(self, names) -> np.ndarray:
        """Matrix of brackets ``<names[i]|names[j]>``."""
        vecs = np.array([self.ray(n).vector for n in names], dtype=np.complex128)
        if vecs.size == 0:
            return np.zeros((0, 0), dtype=np.complex128)
        # elementwise reduction: each entry is independent of which other
        # events are included, unlike a BLAS product
        return np.ascontiguousarray(np.sum(np.conj(vecs)[:, None, :] * vecs[None, :, :], axis=2))

    def __repr__(self):
        return f"EventSpace(dimension={self._dimension}, events={list(self._events)})"
