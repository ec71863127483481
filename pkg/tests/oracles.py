"""Slow, independent reference computations used to check the package."""
import itertools
import math
from collections import deque

import numpy as np


def det_lu(M):
    """Determinant by Gaussian elimination with partial pivoting."""
    a = np.array(M, dtype=float)
    n = a.shape[0]
    det = 1.0
    for c in range(n):
        p = c + int(np.argmax(np.abs(a[c:, c])))
        if a[p, c] == 0.0:
            return 0.0
        if p != c:
            a[[c, p]] = a[[p, c]]
            det = -det
        det *= a[c, c]
        a[c + 1:, c:] -= np.outer(a[c + 1:, c] / a[c, c], a[c, c:])
    return det


def _sturm_count(M, x):
    # number of eigenvalues below x, from the signs of LDL^T pivots of M - xI
    a = np.array(M, dtype=float) - x * np.eye(M.shape[0])
    n = a.shape[0]
    neg = 0
    for c in range(n):
        piv = a[c, c]
        if piv == 0.0:
            piv = 1e-300
        if piv < 0:
            neg += 1
        a[c + 1:, c + 1:] -= np.outer(a[c + 1:, c], a[c, c + 1:]) / piv
    return neg


def eigenvalues_by_bisection(M, tol=1e-12):
    """Roots of det(M - lambda I), bracketed by a Gershgorin interval and
    separated by inertia counts, each refined by sign-change bisection on the
    LU determinant."""
    M = np.asarray(M, dtype=float)
    n = M.shape[0]
    radius = np.max(np.sum(np.abs(M), axis=1))
    lo, hi = -radius - 1.0, radius + 1.0
    roots = []
    for k in range(n):
        # isolate the k-th smallest root: count(a) <= k < count(b)
        a, b = lo, hi
        while b - a > tol * max(1.0, radius):
            mid = 0.5 * (a + b)
            if _sturm_count(M, mid) <= k:
                a = mid
            else:
                b = mid
        roots.append(0.5 * (a + b))
    # polish with the sign of the determinant where the root is simple
    out = []
    for r in roots:
        a, b = r - 1e-9, r + 1e-9
        fa, fb = det_lu(M - a * np.eye(n)), det_lu(M - b * np.eye(n))
        if fa * fb < 0:
            for _ in range(80):
                mid = 0.5 * (a + b)
                fm = det_lu(M - mid * np.eye(n))
                if fa * fm <= 0:
                    b = mid
                else:
                    a, fa = mid, fm
            r = 0.5 * (a + b)
        out.append(r)
    return np.array(out)


def set_partitions(n, K):
    """All partitions of range(n) into exactly K nonempty blocks, as label vectors."""
    labels = [0] * n

    def rec(i, used):
        if n - i < K - used:
            return
        if i == n:
            if used == K:
                yield tuple(labels)
            return
        for lab in range(min(used + 1, K)):
            labels[i] = lab
            yield from rec(i + 1, max(used, lab + 1))

    yield from rec(0, 0)


def _partition_table(n, K):
    return np.array(list(set_partitions(n, K)), dtype=int)


def _block_sums(points, table, K):
    # (partitions, K, dim) block sums and (partitions, K) block sizes
    onehot = table[:, None, :] == np.arange(K)[None, :, None]
    return onehot.astype(float) @ points, onehot.sum(axis=2)


def exhaustive_kmeans_inertia(points, K):
    """Minimum within-cluster sum of squares over every K-partition:
    sum ||x||^2 - sum_j ||S_j||^2 / n_j."""
    sums, sizes = _block_sums(points, _partition_table(points.shape[0], K), K)
    between = np.sum(np.sum(sums**2, axis=2) / sizes, axis=1)
    return float(np.sum(points**2) - between.max())


def exhaustive_spherical_objective(points, K):
    """Maximum of sum_j ||S_j|| over every K-partition."""
    sums, _ = _block_sums(points, _partition_table(points.shape[0], K), K)
    return float(np.max(np.sum(np.linalg.norm(sums, axis=2), axis=1)))


def brute_force_matching(est, truth):
    best = math.inf
    K = truth.shape[0]
    for perm in itertools.permutations(range(est.shape[0]), K):
        best = min(best, float(np.sqrt(np.sum((est[list(perm)] - truth) ** 2))))
    return best


def bfs_components(edges, n):
    adj = [[] for _ in range(n)]
    for i, j in edges:
        adj[i].append(j)
        adj[j].append(i)
    comp = [-1] * n
    c = 0
    for s in range(n):
        if comp[s] >= 0:
            continue
        comp[s] = c
        q = deque([s])
        while q:
            v = q.popleft()
            for w in adj[v]:
                if comp[w] < 0:
                    comp[w] = c
                    q.append(w)
        c += 1
    return comp


def same_partition(a, b):
    """True when two label vectors induce the same set of sets."""
    a, b = np.asarray(a), np.asarray(b)
    fwd, back = {}, {}
    for x, y in zip(a.tolist(), b.tolist()):
        if fwd.setdefault(x, y) != y or back.setdefault(y, x) != x:
            return False
    return True


def planted_graph(rng, n_nodes, n_comp):
    """Random weighted graph whose components are exactly the planted blocks."""
    # at least two nodes per block: a lone node has zero degree and no normalized Laplacian
    labels = np.concatenate([np.repeat(np.arange(n_comp), 2), rng.integers(0, n_comp, n_nodes - 2 * n_comp)])
    rng.shuffle(labels)
    W = np.zeros((n_nodes, n_nodes))
    for c in range(n_comp):
        members = np.flatnonzero(labels == c)
        rng.shuffle(members)
        # a random spanning tree keeps the block connected, extra edges add cycles
        for t in range(1, members.size):
            i, j = members[t], members[rng.integers(t)]
            W[i, j] = W[j, i] = rng.uniform(0.1, 1.0)
        for _ in range(members.size):
            i, j = rng.choice(members, 2) if members.size > 1 else (members[0], members[0])
            if i != j:
                W[i, j] = W[j, i] = rng.uniform(0.1, 1.0)
    return W, labels
