# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled inner loops for the numerics package.

Both functions mirror ``_fallback`` operation for operation so the two
backends agree to rounding.
"""
import numpy as np

from libc.math cimport fabs, sqrt


cdef double _off_norm(double[:, ::1] a) noexcept nogil:
    cdef Py_ssize_t n = a.shape[0], p, q
    cdef double acc = 0.0
    for p in range(n):
        for q in range(p + 1, n):
            acc += a[p, q] * a[p, q]
    return sqrt(2.0 * acc)


def jacobi_sweeps(double[:, ::1] a, double[:, ::1] vt, double tol, int max_sweeps):
    """Cyclic Jacobi rotations applied in place.

    ``a`` must hold a full symmetric matrix; ``vt`` accumulates the rotations
    row-wise (its rows end up as eigenvectors). Returns ``(sweeps, off)``
    where ``off`` is the off-diagonal Frobenius mass at exit.
    """
    cdef Py_ssize_t n = a.shape[0], p, q, k
    cdef double off, apq, app, aqq, theta, t, c, s, x, y, skip
    cdef int sweep = 0
    skip = tol / n if n > 0 else 0.0
    with nogil:
        off = _off_norm(a)
        while off >= tol and sweep < max_sweeps:
            for p in range(n - 1):
                for q in range(p + 1, n):
                    apq = a[p, q]
                    if fabs(apq) <= skip:
                        continue
                    app = a[p, p]
                    aqq = a[q, q]
                    theta = (aqq - app) / (2.0 * apq)
                    if fabs(theta) > 1e150:
                        t = 0.5 / theta
                    else:
                        t = 1.0 / (fabs(theta) + sqrt(theta * theta + 1.0))
                        if theta < 0.0:
                            t = -t
                    c = 1.0 / sqrt(t * t + 1.0)
                    s = t * c
                    for k in range(n):
                        x = a[p, k]
                        y = a[q, k]
                        a[p, k] = c * x - s * y
                        a[q, k] = s * x + c * y
                    for k in range(n):
                        a[k, p] = a[p, k]
                        a[k, q] = a[q, k]
                    a[p, p] = app - t * apq
                    a[q, q] = aqq + t * apq
                    a[p, q] = 0.0
                    a[q, p] = 0.0
                    for k in range(n):
                        x = vt[p, k]
                        y = vt[q, k]
                        vt[p, k] = c * x - s * y
                        vt[q, k] = s * x + c * y
            sweep += 1
            off = _off_norm(a)
    return sweep, off


def nearest_centroid(double[:, ::1] points, double[:, ::1] centroids):
    """Squared-distance assignment; ties go to the lowest centroid index."""
    cdef Py_ssize_t n = points.shape[0], m = points.shape[1], kk = centroids.shape[0]
    cdef Py_ssize_t i, j, l, best
    cdef double d, diff, bestd
    labels = np.empty(n, dtype=np.intp)
    dist = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t[::1] lab = labels
    cdef double[::1] dd = dist
    with nogil:
        for i in range(n):
            best = 0
            bestd = 0.0
            for j in range(kk):
                d = 0.0
                for l in range(m):
                    diff = points[i, l] - centroids[j, l]
                    d = d + diff * diff
                if j == 0 or d < bestd:
                    bestd = d
                    best = j
            lab[i] = best
            dd[i] = bestd
    return labels, dist
