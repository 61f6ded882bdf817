# cython: boundscheck=False, wraparound=False, cdivision=True
"""C scan loops for strong-typicality checks over candidate codeword batches.

Each row of ``ids`` holds the flattened joint-symbol ids of one candidate
tuple; a row is typical when every symbol count lies inside [lo, hi], the
precomputed frequency band.  Reference cells with zero probability have
lo == hi == 0, which both enforces the support condition and allows an
early abort as soon as such a symbol is seen.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef inline bint _row_ok(const cnp.uint32_t * row, Py_ssize_t n,
                         const double * lo, const double * hi,
                         cnp.int64_t * counts, Py_ssize_t k) noexcept nogil:
    cdef Py_ssize_t i, j
    cdef cnp.uint32_t s
    for j in range(k):
        counts[j] = 0
    for i in range(n):
        s = row[i]
        if hi[s] == 0.0:
            return False
        counts[s] += 1
    for j in range(k):
        if counts[j] < lo[j] or counts[j] > hi[j]:
            return False
    return True


def scan_first(cnp.uint32_t[:, ::1] ids, double[::1] lo, double[::1] hi):
    """Index of the first typical row, or -1."""
    cdef Py_ssize_t m = ids.shape[0]
    cdef Py_ssize_t n = ids.shape[1]
    cdef Py_ssize_t k = lo.shape[0]
    cdef cnp.int64_t[::1] buf = np.zeros(k, dtype=np.int64)
    cdef Py_ssize_t r
    if m == 0:
        return -1
    with nogil:
        for r in range(m):
            if _row_ok(&ids[r, 0], n, &lo[0], &hi[0], &buf[0], k):
                with gil:
                    return r
    return -1


def scan_flags(cnp.uint32_t[:, ::1] ids, double[::1] lo, double[::1] hi):
    """Boolean typicality flag per row."""
    cdef Py_ssize_t m = ids.shape[0]
    cdef Py_ssize_t n = ids.shape[1]
    cdef Py_ssize_t k = lo.shape[0]
    cdef cnp.int64_t[::1] buf = np.zeros(k, dtype=np.int64)
    out = np.zeros(m, dtype=np.uint8)
    cdef cnp.uint8_t[::1] ov = out
    cdef Py_ssize_t r
    with nogil:
        for r in range(m):
            ov[r] = _row_ok(&ids[r, 0], n, &lo[0], &hi[0], &buf[0], k)
    return out.astype(bool)


def scan_count2(cnp.uint32_t[:, ::1] ids, double[::1] lo, double[::1] hi):
    """(number of typical rows clamped at 2, index of the first one or -1).

    Stops scanning once two typical rows are seen; that is all a
    unique-decoding step needs to know.
    """
    cdef Py_ssize_t m = ids.shape[0]
    cdef Py_ssize_t n = ids.shape[1]
    cdef Py_ssize_t k = lo.shape[0]
    cdef cnp.int64_t[::1] buf = np.zeros(k, dtype=np.int64)
    cdef Py_ssize_t r
    cdef Py_ssize_t count = 0
    cdef Py_ssize_t first = -1
    with nogil:
        for r in range(m):
            if _row_ok(&ids[r, 0], n, &lo[0], &hi[0], &buf[0], k):
                if count == 0:
                    first = r
                count += 1
                if count >= 2:
                    break
    return count, first
