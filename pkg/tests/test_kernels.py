import itertools
import os
import subprocess
import sys

import numpy as np
import pytest

from qhistory import _kernels_py

try:
    from qhistory import _kernels as _kernels_c
except ImportError:  # extension not built
    _kernels_c = None

backends = [pytest.param(_kernels_py, id="python")]
backends.append(
    pytest.param(_kernels_c, id="cython", marks=pytest.mark.skipif(_kernels_c is None, reason="extension not built"))
)


def random_gram(rng, m):
    return rng.normal(size=(m, m)) + 1j * rng.normal(size=(m, m))


def groups_to_arrays(groups):
    idx = np.array([i for g in groups for i in g], dtype=np.int64)
    off = np.zeros(len(groups) + 1, dtype=np.int64)
    np.cumsum([len(g) for g in groups], out=off[1:])
    return idx, off


@pytest.mark.parametrize("k", backends)
def test_slot_paths_match_enumeration(k, rng):
    g = random_gram(rng, 7)
    groups = [[0], [1, 2, 3], [4], [5, 6], [0]]
    idx, off = groups_to_arrays(groups)
    got = k.slot_path_amplitudes(g, idx, off)
    expected = [np.prod([g[i, j] for i, j in zip(p, p[1:])]) for p in itertools.product(*groups)]
    assert len(got) == 6
    assert np.max(np.abs(got - expected)) < 1e-12


@pytest.mark.parametrize("k", backends)
def test_single_slot_amplitude_is_one(k, rng):
    idx, off = groups_to_arrays([[0, 1]])
    assert np.array_equal(k.slot_path_amplitudes(random_gram(rng, 2), idx, off), [1, 1])


@pytest.mark.parametrize("k", backends)
def test_ragged_paths(k, rng):
    g = random_gram(rng, 4)
    paths = [[0], [0, 1, 2], [3, 2], [1, 1, 1, 1]]
    idx, off = groups_to_arrays(paths)
    got = k.ragged_path_amplitudes(g, idx, off)
    expected = [np.prod([g[i, j] for i, j in zip(p, p[1:])]) if len(p) > 1 else 1 for p in paths]
    assert np.max(np.abs(got - expected)) < 1e-12


@pytest.mark.parametrize("k", backends)
def test_sandwich(k, rng):
    qs = rng.normal(size=(4, 3, 3)) + 1j * rng.normal(size=(4, 3, 3))
    expected = qs[3] @ qs[2] @ qs[1] @ qs[0] @ qs[1] @ qs[2] @ qs[3]
    assert np.max(np.abs(k.sandwich(qs) - expected)) < 1e-9 * np.max(np.abs(expected))
    assert np.array_equal(k.sandwich(qs[:1]), qs[0])


@pytest.mark.parametrize("k", backends)
def test_ordered_sum_is_sequential(k):
    values = np.array([1e16, 1.0, -1e16, 1.0], dtype=np.complex128)
    # sequential left-to-right: (1e16 + 1) rounds to 1e16
    assert k.ordered_sum(values) == 1.0
    assert k.ordered_sum(np.array([], dtype=np.complex128)) == 0


@pytest.mark.skipif(_kernels_c is None, reason="extension not built")
def test_backends_agree_bit_for_bit(rng):
    for _ in range(20):
        g = random_gram(rng, 9)
        groups = [list(rng.choice(9, size=rng.integers(1, 4), replace=False)) for _ in range(5)]
        idx, off = groups_to_arrays(groups)
        a = _kernels_py.slot_path_amplitudes(g, idx, off)
        b = _kernels_c.slot_path_amplitudes(g, idx, off)
        assert np.array_equal(a, b)
        assert _kernels_py.ordered_sum(a) == _kernels_c.ordered_sum(b)
        assert np.array_equal(
            _kernels_py.ragged_path_amplitudes(g, idx, off), _kernels_c.ragged_path_amplitudes(g, idx, off)
        )


def test_pure_python_override():
    env = dict(os.environ, QHISTORY_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", "import qhistory.kernels as k; print(k.BACKEND)"],
        env=env, capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "python"
