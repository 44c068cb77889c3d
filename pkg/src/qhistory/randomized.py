"""Random rays, bases and histories for self-checks."""

from __future__ import annotations

import numpy as np

from .lang import Alt, EventRef, Seq, seq
from .rays import EventSpace, Ray


def random_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def random_ray(rng: np.random.Generator, dim: int) -> Ray:
    return Ray(random_vector(rng, dim))


def random_unitary(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Haar-distributed unitary from the QR of a complex Gaussian matrix."""
    z = (rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))) / np.sqrt(2)
    q, r = np.linalg.qr(z)
    d = np.diag(r)
    return q * (d / np.abs(d))


def random_basis(rng: np.random.Generator, dim: int) -> list[Ray]:
    u = random_unitary(rng, dim)
    return [Ray(u[:, k]) for k in range(dim)]


def random_slot_history(
    rng: np.random.Generator,
    dim: int,
    n_slots: int,
    max_alt: int = 3,
    alt_probability: float = 0.5,
):
    """A random history with single-event endpoints.

    Interior slots become alternative groups of mutually orthogonal rays
    with probability ``alt_probability``. Returns ``(space, history)``.
    """
    events = {}
    steps = []
    for k in range(n_slots):
        interior = 0 < k < n_slots - 1
        size = 1
        if interior and max_alt > 1 and dim > 1 and rng.random() < alt_probability:
            size = int(rng.integers(2, min(max_alt, dim) + 1))
        if size == 1:
            name = f"e{k}"
            events[name] = random_ray(rng, dim)
            steps.append(EventRef(name))
        else:
            basis = random_basis(rng, dim)
            names = [f"e{k}_{j}" for j in range(size)]
            for name, ray in zip(names, basis):
                events[name] = ray
            steps.append(Alt(tuple(map(EventRef, names))))
    return EventSpace(dim, events), seq(*steps)


def random_ast(rng: np.random.Generator, depth: int = 4, width: int = 4, names=None):
    """A random flattened AST of tree depth at most ``depth``.

    Depth counts levels including the leaves, so a lone event has depth 1.
    """
    names = names or [f"x{k}" for k in range(6)]

    def build(d, parent):
        if d <= 1 or rng.random() < 0.3:
            return EventRef(str(rng.choice(names)))
        kinds = ["seq", "alt"]
        if parent in kinds:
            kinds.remove(parent)
        kind = str(rng.choice(kinds))
        n = int(rng.integers(2, width + 1))
        children = [build(d - 1, kind) for _ in range(n)]
        return Seq(tuple(children)) if kind == "seq" else Alt(tuple(children))

    return build(depth, None)
