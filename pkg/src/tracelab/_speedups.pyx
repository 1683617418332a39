# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled twins of the O(N^2) kernels in tracelab.kernels.

Row tiles are processed independently (OpenMP prange); each tile's partial
sum is written to its own slot, so the combination tree on the Python side
is identical whatever the thread count.
"""

import numpy as np

cimport numpy as cnp
from cython.parallel cimport prange
from libc.math cimport fabs, pow, sqrt
from libc.stdlib cimport free, malloc

cnp.import_array()

DEF MEMBERSHIP_GUARD = 1.0000000010


def seminorm_row_partials(
    double[::1] values,
    double[:, ::1] coords,
    double[::1] weights,
    double kexp,
    double p,
    int tile,
    int nthreads,
):
    """Per-row-tile partials of sum_{i != j} |f_i-f_j|^p / |x_i-x_j|^kexp w_i w_j."""
    cdef Py_ssize_t n = values.shape[0]
    cdef Py_ssize_t dim = coords.shape[1]
    cdef Py_ssize_t ntiles = (n + tile - 1) // tile
    out_arr = np.zeros(ntiles, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t t, i, j, d, lo, hi
    cdef double acc, diff, dist2, dist, term

    for t in prange(ntiles, nogil=True, schedule="static", num_threads=nthreads):
        lo = t * tile
        hi = lo + tile
        if hi > n:
            hi = n
        acc = 0.0
        for i in range(lo, hi):
            for j in range(n):
                if j == i:
                    continue
                dist2 = 0.0
                for d in range(dim):
                    dist2 = dist2 + (coords[i, d] - coords[j, d]) ** 2
                dist = sqrt(dist2)
                diff = fabs(values[i] - values[j])
                if diff == 0.0:
                    continue
                term = pow(diff, p) / pow(dist, kexp)
                acc = acc + term * weights[i] * weights[j]
        out[t] = acc
    return out_arr


def convolve_same_1d(double[::1] fw, double[::1] kern, int nthreads):
    """Direct correlation v[i] = sum_j kern[i - j + m - 1] fw[j]."""
    cdef Py_ssize_t m = fw.shape[0]
    out_arr = np.zeros(m, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j
    cdef double acc
    for i in prange(m, nogil=True, schedule="static", num_threads=nthreads):
        acc = 0.0
        for j in range(m):
            acc = acc + kern[i - j + m - 1] * fw[j]
        out[i] = acc
    return out_arr


def convolve_same_2d(double[:, ::1] fw, double[:, ::1] kern, int nthreads):
    cdef Py_ssize_t m0 = fw.shape[0]
    cdef Py_ssize_t m1 = fw.shape[1]
    out_arr = np.zeros((m0, m1), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef Py_ssize_t i0, i1, j0, j1
    cdef double acc
    for i0 in prange(m0, nogil=True, schedule="static", num_threads=nthreads):
        for i1 in range(m1):
            acc = 0.0
            for j0 in range(m0):
                for j1 in range(m1):
                    acc = acc + kern[i0 - j0 + m0 - 1, i1 - j1 + m1 - 1] * fw[j0, j1]
            out[i0, i1] = acc
    return out_arr


def maximal_means(
    double[::1] absf,
    double[:, ::1] coords,
    double[::1] radii,
    int nthreads,
):
    """max over ladder radii of the mean of absf over {|x_j - x_i| < r}."""
    cdef Py_ssize_t n = absf.shape[0]
    cdef Py_ssize_t dim = coords.shape[1]
    cdef Py_ssize_t nr = radii.shape[0]
    out_arr = np.zeros(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i, j, d, k, lo, hi, mid
    cdef double dist2, dist, best, csum, mean
    cdef double* sums
    cdef double* counts

    for i in prange(n, nogil=True, schedule="static", num_threads=nthreads):
        sums = <double*> malloc(nr * sizeof(double))
        counts = <double*> malloc(nr * sizeof(double))
        for k in range(nr):
            sums[k] = 0.0
            counts[k] = 0.0
        for j in range(n):
            dist2 = 0.0
            for d in range(dim):
                dist2 = dist2 + (coords[i, d] - coords[j, d]) ** 2
            dist = sqrt(dist2) * MEMBERSHIP_GUARD
            # first k with radii[k] > dist (upper bound binary search)
            lo = 0
            hi = nr
            while lo < hi:
                mid = (lo + hi) >> 1
                if radii[mid] > dist:
                    hi = mid
                else:
                    lo = mid + 1
            if lo < nr:
                sums[lo] = sums[lo] + absf[j]
                counts[lo] = counts[lo] + 1.0
        best = 0.0
        csum = 0.0
        dist2 = 0.0  # reuse as running count
        for k in range(nr):
            csum = csum + sums[k]
            dist2 = dist2 + counts[k]
            if dist2 > 0.0:
                mean = csum / dist2
                if mean > best:
                    best = mean
        out[i] = best
        free(sums)
        free(counts)
    return out_arr
