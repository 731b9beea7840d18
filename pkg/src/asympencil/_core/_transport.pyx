# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
from libc.math cimport sqrt

import numpy as np


def double_reflection(points, tangents, u0):
    """Compiled twin of ``_transport_py.double_reflection``."""
    cdef double[:, ::1] x = np.ascontiguousarray(points, dtype=np.float64)
    cdef double[:, ::1] tg = np.ascontiguousarray(tangents, dtype=np.float64)
    cdef Py_ssize_t n = x.shape[0]
    out_arr = np.empty((n, 3), dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double r0 = u0[0], r1 = u0[1], r2 = u0[2]
    cdef double v0, v1, v2, w0, w1, w2, l0, l1, l2, c1, c2, k, norm
    cdef Py_ssize_t i
    out[0, 0] = r0
    out[0, 1] = r1
    out[0, 2] = r2
    for i in range(n - 1):
        v0 = x[i + 1, 0] - x[i, 0]
        v1 = x[i + 1, 1] - x[i, 1]
        v2 = x[i + 1, 2] - x[i, 2]
        c1 = v0 * v0 + v1 * v1 + v2 * v2
        if c1 != 0.0:
            k = 2.0 * (v0 * r0 + v1 * r1 + v2 * r2) / c1
            l0 = r0 - k * v0
            l1 = r1 - k * v1
            l2 = r2 - k * v2
            k = 2.0 * (v0 * tg[i, 0] + v1 * tg[i, 1] + v2 * tg[i, 2]) / c1
            w0 = tg[i + 1, 0] - (tg[i, 0] - k * v0)
            w1 = tg[i + 1, 1] - (tg[i, 1] - k * v1)
            w2 = tg[i + 1, 2] - (tg[i, 2] - k * v2)
            c2 = w0 * w0 + w1 * w1 + w2 * w2
            if c2 == 0.0:
                r0, r1, r2 = l0, l1, l2
            else:
                k = 2.0 * (w0 * l0 + w1 * l1 + w2 * l2) / c2
                r0 = l0 - k * w0
                r1 = l1 - k * w1
                r2 = l2 - k * w2
            norm = sqrt(r0 * r0 + r1 * r1 + r2 * r2)
            r0 /= norm
            r1 /= norm
            r2 /= norm
        out[i + 1, 0] = r0
        out[i + 1, 1] = r1
        out[i + 1, 2] = r2
    return out_arr
