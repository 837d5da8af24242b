# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled assembly kernels for the divided-difference matrices.

Same contracts as _assembly_py; the loops are fused so the big 2-D blocks
are written in a single pass with precomputed reciprocals instead of the
chain of full-size numpy temporaries.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def loewner_1d(const double complex[::1] shat, const double complex[::1] hhat,
               const double complex[::1] xi, const double complex[::1] h):
    cdef Py_ssize_t m = shat.shape[0], n = xi.shape[0]
    cdef cnp.ndarray out_arr = np.empty((m, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, k
    for i in range(m):
        for k in range(n):
            out[i, k] = (hhat[i] - h[k]) / (shat[i] - xi[k])
    return out_arr


def loewner_12(const double complex[::1] shat, const double complex[::1] xi,
               const double complex[:, ::1] hmat,
               const double complex[:, ::1] h2_sup_ls):
    cdef Py_ssize_t m = shat.shape[0], n = xi.shape[0]
    cdef cnp.ndarray out_arr = np.empty((n * m, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, l
    cdef double complex hij, r
    for i in range(n):
        for j in range(m):
            hij = h2_sup_ls[i, j]
            for l in range(n):
                out[i * m + j, l] = (hij - hmat[i, l]) / (shat[j] - xi[l])
    return out_arr


def loewner_21(const double complex[::1] shat, const double complex[::1] xi,
               const double complex[:, ::1] hmat,
               const double complex[:, ::1] h2_ls_sup):
    cdef Py_ssize_t m = shat.shape[0], n = xi.shape[0]
    cdef cnp.ndarray out_arr = np.empty((m * n, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t j, i, k
    cdef double complex hji
    for j in range(m):
        for i in range(n):
            hji = h2_ls_sup[j, i]
            for k in range(n):
                out[j * n + i, k] = (hji - hmat[k, i]) / (shat[j] - xi[k])
    return out_arr


def loewner_2d(const double complex[::1] shat, const double complex[::1] xi,
               const double complex[:, ::1] hmat,
               const double complex[:, ::1] h2_ls_ls):
    cdef Py_ssize_t m = shat.shape[0], n = xi.shape[0]
    cdef cnp.ndarray out_arr = np.empty((m * m, n * n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef cnp.ndarray rec_arr = np.empty((m, n), dtype=np.complex128)
    cdef double complex[:, ::1] rec = rec_arr
    cdef Py_ssize_t i, j, k, l
    cdef double complex hij, rik
    for i in range(m):
        for k in range(n):
            rec[i, k] = 1.0 / (shat[i] - xi[k])
    for i in range(m):
        for j in range(m):
            hij = h2_ls_ls[i, j]
            for k in range(n):
                rik = rec[i, k]
                for l in range(n):
                    out[i * m + j, k * n + l] = (hij - hmat[k, l]) * rik * rec[j, l]
    return out_arr


def u_matrix(const double complex[::1] shat, const double complex[::1] xi,
             const double complex[:, ::1] h2_ls_ls):
    cdef Py_ssize_t m = shat.shape[0], n = xi.shape[0]
    cdef cnp.ndarray out_arr = np.empty((m * m, n), dtype=np.complex128)
    cdef double complex[:, ::1] out = out_arr
    cdef Py_ssize_t i, j, k
    cdef double complex hij, si, sj
    for i in range(m):
        si = shat[i]
        for j in range(m):
            hij = h2_ls_ls[i, j]
            sj = shat[j]
            for k in range(n):
                out[i * m + j, k] = hij * (si + sj - 2.0 * xi[k]) / (
                    (si - xi[k]) * (sj - xi[k]))
    return out_arr
