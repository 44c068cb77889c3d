# Compiled kernels. Semantics and arithmetic order follow _kernels_py.py.
# Complex products are spelled out on (re, im) pairs so results match the
# Python fallback bit for bit.

import numpy as np


cdef inline void _cmul(double ar, double ai, double br, double bi,
                       double* outr, double* outi) noexcept nogil:
    outr[0] = ar * br - ai * bi
    outi[0] = ar * bi + ai * br


cdef void _matmul(const double complex[:, ::1] a, const double complex[:, ::1] b,
                  double complex[:, ::1] out) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0]
    cdef Py_ssize_t i, j, k
    cdef double sr, si, pr, pi
    for i in range(n):
        for j in range(n):
            sr = 0.0
            si = 0.0
            for k in range(n):
                _cmul(a[i, k].real, a[i, k].imag, b[k, j].real, b[k, j].imag, &pr, &pi)
                sr = sr + pr
                si = si + pi
            out[i, j] = sr + 1j * si


def sandwich(stack):
    cdef const double complex[:, :, ::1] qs = np.ascontiguousarray(stack, dtype=np.complex128)
    cdef Py_ssize_t n = qs.shape[0]
    cdef Py_ssize_t dim = qs.shape[1]
    g_arr = np.array(qs[0], dtype=np.complex128)
    tmp_arr = np.empty((dim, dim), dtype=np.complex128)
    cdef double complex[:, ::1] g = g_arr
    cdef double complex[:, ::1] tmp = tmp_arr
    cdef Py_ssize_t s
    with nogil:
        for s in range(1, n):
            _matmul(qs[s], g, tmp)
            _matmul(tmp, qs[s], g)
    return g_arr


def slot_path_amplitudes(gram, slot_idx, slot_offsets):
    cdef const double complex[:, ::1] g = np.ascontiguousarray(gram, dtype=np.complex128)
    cdef const long long[::1] idx = np.ascontiguousarray(slot_idx, dtype=np.int64)
    cdef const long long[::1] off = np.ascontiguousarray(slot_offsets, dtype=np.int64)
    cdef Py_ssize_t nslots = off.shape[0] - 1
    cdef Py_ssize_t total = 1
    cdef Py_ssize_t k
    for k in range(nslots):
        total *= off[k + 1] - off[k]
    out_arr = np.empty(total, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    if total == 0:
        return out_arr
    counters_arr = np.zeros(nslots, dtype=np.int64)
    cdef long long[::1] counters = counters_arr
    cdef Py_ssize_t p, prev, cur
    cdef double ar, ai, nr, ni
    with nogil:
        for p in range(total):
            ar = 1.0
            ai = 0.0
            prev = idx[off[0] + counters[0]]
            for k in range(1, nslots):
                cur = idx[off[k] + counters[k]]
                _cmul(ar, ai, g[prev, cur].real, g[prev, cur].imag, &nr, &ni)
                ar = nr
                ai = ni
                prev = cur
            out[p] = ar + 1j * ai
            # odometer, last slot fastest
            k = nslots - 1
            while k >= 0:
                counters[k] += 1
                if counters[k] < off[k + 1] - off[k]:
                    break
                counters[k] = 0
                k -= 1
    return out_arr


def ragged_path_amplitudes(gram, flat_idx, offsets):
    cdef const double complex[:, ::1] g = np.ascontiguousarray(gram, dtype=np.complex128)
    cdef const long long[::1] idx = np.ascontiguousarray(flat_idx, dtype=np.int64)
    cdef const long long[::1] off = np.ascontiguousarray(offsets, dtype=np.int64)
    cdef Py_ssize_t npaths = off.shape[0] - 1
    out_arr = np.empty(max(npaths, 0), dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t p, t
    cdef long long i, j
    cdef double ar, ai, nr, ni
    with nogil:
        for p in range(npaths):
            ar = 1.0
            ai = 0.0
            for t in range(off[p] + 1, off[p + 1]):
                i = idx[t - 1]
                j = idx[t]
                _cmul(ar, ai, g[i, j].real, g[i, j].imag, &nr, &ni)
                ar = nr
                ai = ni
            out[p] = ar + 1j * ai
    return out_arr


def ordered_sum(values):
    cdef const double complex[::1] v = np.ascontiguousarray(values, dtype=np.complex128)
    cdef double sr = 0.0, si = 0.0
    cdef Py_ssize_t i
    for i in range(v.shape[0]):
        sr = sr + v[i].real
        si = si + v[i].imag
    return complex(sr, si)
