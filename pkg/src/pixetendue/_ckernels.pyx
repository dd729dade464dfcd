# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot loops; ``_pykernels`` holds the numpy equivalents."""
from libc.math cimport fabs, floor, log1p

import numpy as np
cimport numpy as cnp

cnp.import_array()


cdef inline void _neumaier(double* s, double* c, double x) noexcept nogil:
    cdef double t = s[0] + x
    if fabs(s[0]) >= fabs(x):
        c[0] += (s[0] - t) + x
    else:
        c[0] += (x - t) + s[0]
    s[0] = t


def etendue_sum(const double[::1] px, const double[::1] py, const double[::1] pz,
                const double[::1] pw, double nx, double ny, double nz,
                const double[::1] qx, const double[::1] qy, double qz,
                const double[::1] qw):
    cdef Py_ssize_t i, j, n_patch = px.shape[0], n_pupil = qx.shape[0]
    cdef double dx, dy, dz, d2, cs, inner, c_in
    cdef double total = 0.0, c_out = 0.0
    with nogil:
        for i in range(n_patch):
            inner = 0.0
            c_in = 0.0
            for j in range(n_pupil):
                dx = qx[j] - px[i]
                dy = qy[j] - py[i]
                dz = qz - pz[i]
                cs = nx * dx + ny * dy + nz * dz
                if cs <= 0.0 or dz <= 0.0:
                    continue
                d2 = dx * dx + dy * dy + dz * dz
                _neumaier(&inner, &c_in, qw[j] * cs * dz / (d2 * d2))
            _neumaier(&total, &c_out, pw[i] * (inner + c_in))
    return total + c_out


def thermal_counts(const double[:, ::1] uniforms, double log_q):
    cdef Py_ssize_t i, j, n = uniforms.shape[0], m = uniforms.shape[1]
    cdef cnp.int64_t acc
    out = np.empty(n, dtype=np.int64)
    cdef cnp.int64_t[::1] res = out
    with nogil:
        for i in range(n):
            acc = 0
            for j in range(m):
                acc += <cnp.int64_t> floor(log1p(-uniforms[i, j]) / log_q)
            res[i] = acc
    return out


def power_sums(const cnp.int64_t[::1] counts):
    cdef Py_ssize_t i, n = counts.shape[0]
    cdef cnp.int64_t c, c2, s1 = 0, s2 = 0, s3 = 0, s4 = 0
    with nogil:
        for i in range(n):
            c = counts[i]
            c2 = c * c
            s1 += c
            s2 += c2
            s3 += c2 * c
            s4 += c2 * c2
    return int(s1), int(s2), int(s3), int(s4)
