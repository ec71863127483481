"""Pure numpy versions of the compiled kernels in ``_kernels.pyx``."""
import numpy as np


def _off_norm(a):
    return float(np.sqrt(2.0 * np.sum(np.triu(a, 1) ** 2)))


def jacobi_sweeps(a, vt, tol, max_sweeps):
    n = a.shape[0]
    skip = tol / n if n > 0 else 0.0
    sweep = 0
    off = _off_norm(a)
    while off >= tol and sweep < max_sweeps:
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip:
                    continue
                app = a[p, p]
                aqq = a[q, q]
                theta = (aqq - app) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                    if theta < 0.0:
                        t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                x = a[p].copy()
                y = a[q].copy()
                a[p] = c * x - s * y
                a[q] = s * x + c * y
                a[:, p] = a[p]
                a[:, q] = a[q]
                a[p, p] = app - t * apq
                a[q, q] = aqq + t * apq
                a[p, q] = 0.0
                a[q, p] = 0.0
                x = vt[p].copy()
                y = vt[q].copy()
                vt[p] = c * x - s * y
                vt[q] = s * x + c * y
        sweep += 1
        off = _off_norm(a)
    return sweep, off


def nearest_centroid(points, centroids):
    diff = points[:, None, :] - centroids[None, :, :]
    d2 = np.einsum("ikl,ikl->ik", diff, diff)
    # argmin returns the first minimum, i.e. the lowest centroid index on ties
    labels = np.argmin(d2, axis=1).astype(np.intp)
    return labels, d2[np.arange(points.shape[0]), labels]
