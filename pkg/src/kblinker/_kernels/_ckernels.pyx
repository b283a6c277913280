"""Compiled implementations of the hot-path kernels.

Same contracts as kblinker._kernels._pykernels; see the docstrings there.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def pagerank_step(double[::1] v, long long[::1] src, long long[::1] dst,
                  double[::1] inv_outdeg, unsigned char[::1] dangling,
                  double damping):
    cdef Py_ssize_t n = v.shape[0]
    cdef Py_ssize_t m = src.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t k
    cdef double dangling_mass = 0.0
    cdef double base

    for k in range(n):
        if dangling[k]:
            dangling_mass += v[k]
    for k in range(m):
        out[dst[k]] += v[src[k]] * inv_outdeg[src[k]]
    base = (damping * dangling_mass + (1.0 - damping)) / n
    for k in range(n):
        out[k] = damping * out[k] + base
    return out_arr


cdef inline bint _contains(long long[::1] links, Py_ssize_t lo, Py_ssize_t hi,
                           long long needle) nogil:
    # binary search over the sorted slice links[lo:hi]
    cdef Py_ssize_t mid
    while lo < hi:
        mid = (lo + hi) // 2
        if links[mid] < needle:
            lo = mid + 1
        elif links[mid] > needle:
            hi = mid
        else:
            return True
    return False


cdef inline long long _intersection_size(long long[::1] links,
                                         Py_ssize_t a_lo, Py_ssize_t a_hi,
                                         Py_ssize_t b_lo, Py_ssize_t b_hi) nogil:
    cdef long long count = 0
    cdef Py_ssize_t i = a_lo, j = b_lo
    while i < a_hi and j < b_hi:
        if links[i] < links[j]:
            i += 1
        elif links[i] > links[j]:
            j += 1
        else:
            count += 1
            i += 1
            j += 1
    return count


def similarity_pairs(long long[::1] ids, long long[::1] offsets,
                     long long[::1] links, long long[::1] left,
                     long long[::1] right, double beta):
    cdef Py_ssize_t n_pairs = left.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_arr = np.empty(n_pairs, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t p, a, b, a_lo, a_hi, b_lo, b_hi
    cdef long long ia, ib, len_a, len_b, inter
    cdef double stay_a, stay_b, s

    with nogil:
        for p in range(n_pairs):
            a = left[p]
            b = right[p]
            a_lo = offsets[a]
            a_hi = offsets[a + 1]
            b_lo = offsets[b]
            b_hi = offsets[b + 1]
            len_a = a_hi - a_lo
            len_b = b_hi - b_lo
            ia = ids[a]
            ib = ids[b]
            stay_a = beta if len_a > 0 else 1.0
            stay_b = beta if len_b > 0 else 1.0
            s = stay_a * stay_b if ia == ib else 0.0
            if len_b > 0 and _contains(links, b_lo, b_hi, ia):
                s += stay_a * (1.0 - stay_b) / len_b
            if len_a > 0 and _contains(links, a_lo, a_hi, ib):
                s += stay_b * (1.0 - stay_a) / len_a
            if len_a > 0 and len_b > 0:
                inter = _intersection_size(links, a_lo, a_hi, b_lo, b_hi)
                s += (1.0 - stay_a) * (1.0 - stay_b) * inter / (<double>len_a * <double>len_b)
            out[p] = s
    return out_arr
