# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled counting kernels; same signatures as ``_fallback``.

The loops release the GIL so the engine can split the outer index across
Python threads.
"""
import numpy as np

cimport numpy as cnp
from libc.stdint cimport int64_t

cnp.import_array()


def spectrum_dense(const int64_t[:, ::1] at, const int64_t[:, ::1] byz,
                   const int64_t[:, ::1] czx, Py_ssize_t q,
                   Py_ssize_t y_lo, Py_ssize_t y_hi, int64_t[::1] out):
    cdef Py_ssize_t n1 = czx.shape[1]
    cdef Py_ssize_t n3 = czx.shape[0]
    cdef Py_ssize_t qq = q * q
    cdef Py_ssize_t y, z, x, base
    cdef const int64_t[::1] arow
    cdef const int64_t[::1] crow
    if out.shape[0] != q * qq:
        raise ValueError("output buffer must have q**3 entries")
    with nogil:
        for y in range(y_lo, y_hi):
            arow = at[y]
            for z in range(n3):
                base = byz[y, z] * q
                crow = czx[z]
                for x in range(n1):
                    out[arow[x] * qq + base + crow[x]] += 1


def pair_histogram(const int64_t[:, ::1] table, Py_ssize_t q):
    result = np.zeros(q, dtype=np.int64)
    cdef int64_t[::1] out = result
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(table.shape[0]):
            for j in range(table.shape[1]):
                out[table[i, j]] += 1
    return result


def row_value_counts(const int64_t[:, ::1] table, Py_ssize_t q):
    result = np.zeros((table.shape[0], q), dtype=np.int64)
    cdef int64_t[:, ::1] out = result
    cdef Py_ssize_t i, j
    with nogil:
        for i in range(table.shape[0]):
            for j in range(table.shape[1]):
                out[i, table[i, j]] += 1
    return result


def first_dependent(const int64_t[:, ::1] x, const int64_t[:, ::1] y,
                    const int64_t[:, ::1] z, int64_t q):
    cdef Py_ssize_t i, j, k
    cdef int64_t c0, c1, c2, d
    cdef Py_ssize_t fi = -1, fj = -1, fk = -1
    with nogil:
        for i in range(x.shape[0]):
            for j in range(y.shape[0]):
                for k in range(z.shape[0]):
                    c0 = y[j, 1] * z[k, 2] - y[j, 2] * z[k, 1]
                    c1 = y[j, 2] * z[k, 0] - y[j, 0] * z[k, 2]
                    c2 = y[j, 0] * z[k, 1] - y[j, 1] * z[k, 0]
                    d = (x[i, 0] * c0 + x[i, 1] * c1 + x[i, 2] * c2) % q
                    if d == 0:
                        fi = i
                        fj = j
                        fk = k
                        break
                if fi >= 0:
                    break
            if fi >= 0:
                break
    return (fi, fj, fk)
