# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops; mirrors ``_pykernels`` exactly."""
import numpy as np

from libc.math cimport cos, sin


def circle_moments(thetas, weights, Py_ssize_t m):
    cdef const double[::1] th = np.ascontiguousarray(thetas, dtype=np.float64)
    cdef const double complex[:, :, ::1] w = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef Py_ssize_t natoms = w.shape[0], p = w.shape[1], q = w.shape[2]
    out = np.zeros((m + 1, p, q), dtype=np.complex128)
    cdef double complex[:, :, ::1] g = out
    cdef Py_ssize_t j, k, a, b
    cdef double complex ph
    for j in range(natoms):
        for k in range(m + 1):
            ph = cos(k * th[j]) + 1j * sin(k * th[j])
            for a in range(p):
                for b in range(q):
                    g[k, a, b] = g[k, a, b] + ph * w[j, a, b]
    return out


def interval_moments(xs, weights, Py_ssize_t n):
    cdef const double[::1] x = np.ascontiguousarray(xs, dtype=np.float64)
    cdef const double complex[:, :, ::1] w = np.ascontiguousarray(weights, dtype=np.complex128)
    cdef Py_ssize_t natoms = w.shape[0], p = w.shape[1], q = w.shape[2]
    out = np.zeros((n + 1, p, q), dtype=np.complex128)
    cdef double complex[:, :, ::1] s = out
    cdef Py_ssize_t j, k, a, b
    cdef double pw
    for j in range(natoms):
        pw = 1.0
        for k in range(n + 1):
            for a in range(p):
                for b in range(q):
                    s[k, a, b] = s[k, a, b] + pw * w[j, a, b]
            pw = pw * x[j]
    return out


def polyval(coeffs, zs):
    cdef const double complex[:, :, ::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef const double complex[::1] z = np.ascontiguousarray(np.ravel(zs), dtype=np.complex128)
    cdef Py_ssize_t deg = c.shape[0] - 1, p = c.shape[1], q = c.shape[2]
    cdef Py_ssize_t npts = z.shape[0]
    out = np.empty((npts, p, q), dtype=np.complex128)
    cdef double complex[:, :, ::1] o = out
    cdef Py_ssize_t i, k, a, b
    cdef double complex zi
    for i in range(npts):
        zi = z[i]
        for a in range(p):
            for b in range(q):
                o[i, a, b] = c[deg, a, b]
        for k in range(deg - 1, -1, -1):
            for a in range(p):
                for b in range(q):
                    o[i, a, b] = o[i, a, b] * zi + c[k, a, b]
    return out
