# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled versions of the kernels in ``_pykernels``."""

import numpy as np
cimport numpy as cnp
from libc.math cimport exp, log, fabs, pow, sqrt, INFINITY, isinf

cnp.import_array()

cdef double TINY = 1e-300
cdef int MAX_NEWTON = 80


cdef double _distance(const double[:] x, const double[:] a, double[:] lx) noexcept nogil:
    cdef Py_ssize_t n = x.shape[0], k
    cdef double big = 0.0, lo = -INFINITY, hi = 0.0, u, g, dg, e, new, v
    cdef int it
    for k in range(n):
        v = fabs(x[k])
        if v > big:
            big = v
    if big < TINY:
        return 0.0
    for k in range(n):
        v = fabs(x[k])
        if v > 0.0:
            lx[k] = log(v)
            if lx[k] / a[k] > lo:
                lo = lx[k] / a[k]
        else:
            lx[k] = -INFINITY
    for k in range(n):
        if lx[k] > -INFINITY:
            hi += exp(lx[k] / a[k] - lo)
    hi = log(hi) + lo
    u = lo
    for it in range(MAX_NEWTON):
        g = -1.0
        dg = 0.0
        for k in range(n):
            if lx[k] > -INFINITY:
                e = exp(2.0 * lx[k] - 2.0 * a[k] * u)
                g += e
                dg -= 2.0 * a[k] * e
        new = u - g / dg
        if new < lo:
            new = lo
        elif new > hi:
            new = hi
        if fabs(new - u) <= 1e-15 * (fabs(u) if fabs(u) > 1.0 else 1.0):
            u = new
            break
        u = new
    return exp(u)


def aniso_distance_many(x, a):
    cdef const double[:, :] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef const double[:] av = np.ascontiguousarray(a, dtype=np.float64)
    cdef Py_ssize_t m = xv.shape[0], i
    out = np.empty(m, dtype=np.float64)
    cdef double[:] ov = out
    cdef double[:] scratch = np.empty(xv.shape[1], dtype=np.float64)
    with nogil:
        for i in range(m):
            ov[i] = _distance(xv[i], av, scratch)
    return out


cdef inline double _qpow(double t, double q, int mode) noexcept nogil:
    # mode > 3 encodes the integer power mode - 1
    cdef double v
    cdef int k
    if mode == 1:
        return t
    if mode == 2:
        return t * t
    if mode == 3:
        return sqrt(t)
    if mode > 3:
        v = t
        for k in range(mode - 2):
            v *= t
        return v
    return exp(q * log(t)) if t > 0.0 else 0.0


def band_lq(absvals, weights, q):
    arr = np.ascontiguousarray(absvals, dtype=np.float64)
    shape = arr.shape[1:]
    cdef const double[:, ::1] s = arr.reshape(arr.shape[0], -1)
    cdef const double[::1] w = np.ascontiguousarray(weights, dtype=np.float64)
    cdef Py_ssize_t nb = s.shape[0], m = s.shape[1], i, j
    cdef double qq = float(q), v, wj, inv
    # 1, 2, 0.5 skip pow()
    cdef int mode = 1 if qq == 1.0 else 2 if qq == 2.0 else 3 if qq == 0.5 else 0
    if mode == 0 and 3.0 <= qq <= 8.0 and qq == int(qq):
        mode = int(qq) + 1
    top_arr = np.zeros(m, dtype=np.float64)
    out = np.zeros(m, dtype=np.float64)
    cdef double[::1] top = top_arr
    cdef double[::1] ov = out
    with nogil:
        # row-wise passes keep the inner loop contiguous
        for j in range(nb):
            wj = w[j]
            for i in range(m):
                v = wj * s[j, i]
                top[i] = v if v > top[i] else top[i]
        if not isinf(qq):
            for i in range(m):
                if top[i] > 0.0:
                    top[i] = 1.0 / top[i]
            for j in range(nb):
                wj = w[j]
                for i in range(m):
                    ov[i] += _qpow(wj * s[j, i] * top[i], qq, mode)
            for i in range(m):
                if top[i] > 0.0:
                    inv = 1.0 / top[i]
                    if mode == 1:
                        ov[i] = inv * ov[i]
                    elif mode == 2:
                        ov[i] = inv * sqrt(ov[i])
                    elif mode == 3:
                        ov[i] = inv * ov[i] * ov[i]
                    else:
                        ov[i] = inv * pow(ov[i], 1.0 / qq)
    if isinf(qq):
        return top_arr.reshape(shape)
    return out.reshape(shape)
