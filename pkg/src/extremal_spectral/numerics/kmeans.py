"""Lloyd k-means with k-means++ seeding, and its spherical variant."""
from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidParameterError
from . import _backend

DEFAULT_RESTARTS = 10
DEFAULT_TOL = 1e-8
DEFAULT_MAX_ITER = 300


@dataclass
class KMeansResult:
    labels: np.ndarray
    centroids: np.ndarray
    inertia: float
    n_iter: int = 0
    restart: int = 0
    history: list = field(default_factory=list)
    variant: str = "lloyd+kmeans++"

    @property
    def objective(self):
        """Summed cosine similarity; only meaningful for the spherical variant."""
        return self.labels.size - self.inertia


def _validate(points, K, restarts, max_iter):
    points = np.ascontiguousarray(np.atleast_2d(np.asarray(points, dtype=float)))
    if points.ndim != 2 or points.shape[0] == 0:
        raise InvalidParameterError("points must be a non-empty 2-D array")
    if int(K) != K or K < 1:
        raise InvalidParameterError(f"K must be a positive integer, got {K!r}")
    if K > points.shape[0]:
        raise InvalidParameterError(f"K={K} exceeds the number of points {points.shape[0]}")
    if restarts < 1 or max_iter < 1:
        raise InvalidParameterError("restarts and max_iter must be positive")
    return points, int(K)


def kmeans_pp_init(points, K, gen):
    """k-means++ seeding: each new center drawn with probability proportional to D^2."""
    n = points.shape[0]
    idx = [int(gen.integers(n))]
    d2 = np.sum((points - points[idx[0]]) ** 2, axis=1)
    for _ in range(1, K):
        total = d2.sum()
        if total > 0:
            cum = np.cumsum(d2)
            i = int(np.searchsorted(cum, gen.random() * total, side="right"))
            i = min(i, n - 1)
        else:
            i = int(gen.integers(n))
        idx.append(i)
        d2 = np.minimum(d2, np.sum((points - points[i]) ** 2, axis=1))
    return points[idx].copy()


def _reseed_empty(points, labels, d2, centroids, counts):
    # each empty cluster takes the point farthest from its current centroid
    for j in np.flatnonzero(counts == 0):
        movable = counts[labels] > 1
        if not np.any(movable):
            break
        cand = np.where(movable, d2, -1.0)
        i = int(np.argmax(cand))
        counts[labels[i]] -= 1
        labels[i] = j
        counts[j] = 1
        centroids[j] = points[i]
        d2[i] = 0.0


def _lloyd(points, centroids, tol, max_iter, spherical, kernels):
    history = []
    K, m = centroids.shape
    it = 0
    for it in range(1, max_iter + 1):
        labels, d2 = kernels.nearest_centroid(points, centroids)
        history.append(float(d2.sum() / 2.0 if spherical else d2.sum()))
        counts = np.bincount(labels, minlength=K)
        sums = np.zeros((K, m))
        np.add.at(sums, labels, points)
        new = centroids.copy()
        filled = counts > 0
        if spherical:
            norms = np.linalg.norm(sums, axis=1)
            ok = filled & (norms > 1e-12)
            new[ok] = sums[ok] / norms[ok, None]
            # zero-mean clusters are treated as empty
            counts = np.where(ok, counts, 0)
            if not np.all(ok):
                labels = labels.copy()
                d2 = d2.copy()
                _reseed_empty(points, labels, d2, new, counts)
        else:
            new[filled] = sums[filled] / counts[filled, None]
            if not np.all(filled):
                labels = labels.copy()
                d2 = d2.copy()
                _reseed_empty(points, labels, d2, new, counts)
        shift = float(np.max(np.linalg.norm(new - centroids, axis=1)))
        centroids = new
        if shift < tol:
            break
    labels, d2 = kernels.nearest_centroid(points, centroids)
    inertia = float(d2.sum() / 2.0 if spherical else d2.sum())
    history.append(inertia)
    return labels, centroids, inertia, it, history


def _run(points, K, restarts, tol, max_iter, stream, spherical, backend):
    kernels = _backend.kernels if backend is None else backend
    best = None
    for r in range(restarts):
        gen = stream.substream("kmeans-restart", r).generator
        init = kmeans_pp_init(points, K, gen)
        if spherical:
            norms = np.linalg.norm(init, axis=1)
            init = init / np.where(norms > 0, norms, 1.0)[:, None]
        labels, centroids, inertia, n_iter, history = _lloyd(points, init, tol, max_iter, spherical, kernels)
        # strict < keeps the lowest restart index on ties
        if best is None or inertia < best.inertia:
            best = KMeansResult(labels, centroids, inertia, n_iter, r, history,
                                "spherical+kmeans++" if spherical else "lloyd+kmeans++")
    return best


def kmeans(points, K, restarts=DEFAULT_RESTARTS, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
           stream=None, backend=None) -> KMeansResult:
    """Best-of-``restarts`` Lloyd k-means.

    Each restart is seeded by k-means++ from its own labelled substream of
    ``stream``, so results do not depend on evaluation order.  Iteration stops
    when no centroid moves more than ``tol``.  Assignment ties go to the lowest
    centroid index.
    """
    from ..variates import RandomStream

    points, K = _validate(points, K, restarts, max_iter)
    return _run(points, K, restarts, tol, max_iter, stream or RandomStream(0), False, backend)


def spherical_kmeans(points, K, restarts=DEFAULT_RESTARTS, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER,
                     stream=None, backend=None) -> KMeansResult:
    """k-means on the unit sphere maximising summed cosine similarity.

    Centroids are normalized cluster means.  ``inertia`` is reported as
    ``sum(1 - cos)``, so ``result.objective`` is the summed cosine similarity.
    """
    from ..variates import RandomStream

    points, K = _validate(points, K, restarts, max_iter)
    norms = np.linalg.norm(points, axis=1)
    if np.max(np.abs(norms - 1.0)) > 1e-8:
        raise InvalidParameterError("spherical k-means needs unit-norm rows")
    return _run(points, K, restarts, tol, max_iter, stream or RandomStream(0), True, backend)
