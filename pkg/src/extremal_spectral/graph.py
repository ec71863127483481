"""k-NN graphs on the unit sphere, kernel weights, normalized Laplacian and
connected components.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidParameterError, IsolatedNodeError

RULES = ("knn_symmetric", "knn_mutual", "full")


@dataclass
class WeightedGraph:
    weights: np.ndarray  # symmetric, nonnegative, zero diagonal
    rule: str
    k: Optional[int] = None
    kernel_scale: float = 1.0

    @property
    def n_nodes(self) -> int:
        return self.weights.shape[0]

    def edges(self) -> np.ndarray:
        i, j = np.nonzero(np.triu(self.weights, 1))
        return np.column_stack([i, j])

    def degrees(self) -> np.ndarray:
        return self.weights.sum(axis=1)

    def subgraph(self, nodes) -> "WeightedGraph":
        nodes = np.asarray(nodes, dtype=int)
        return WeightedGraph(self.weights[np.ix_(nodes, nodes)], self.rule, self.k, self.kernel_scale)


def pairwise_distances(points) -> np.ndarray:
    """Euclidean (chordal) distances, exactly symmetric."""
    x = np.asarray(points, dtype=float)
    d2 = np.zeros((x.shape[0], x.shape[0]))
    for c in range(x.shape[1]):
        diff = x[:, c, None] - x[None, :, c]
        d2 += diff * diff
    return np.sqrt(d2)


def knn_edges(points, k: int, mode: str = "symmetric", distances=None) -> np.ndarray:
    """Undirected k-NN edges as an (E, 2) array of pairs i < j, sorted.

    ``symmetric`` joins i and j when either is among the other's k nearest
    neighbours, ``mutual`` only when both are.  Ties at the k-th distance are
    resolved in favour of the lower index.
    """
    x = np.asarray(points, dtype=float)
    n = x.shape[0]
    if int(k) != k or not 1 <= k < n:
        raise InvalidParameterError(f"k must be an integer in [1, {n}), got {k!r}")
    if mode not in ("symmetric", "mutual"):
        raise InvalidParameterError(f"mode must be 'symmetric' or 'mutual', got {mode!r}")
    dist = pairwise_distances(x) if distances is None else np.array(distances, dtype=float)
    np.fill_diagonal(dist, np.inf)
    nbrs = np.argsort(dist, axis=1, kind="stable")[:, :k]
    directed = np.zeros((n, n), dtype=bool)
    directed[np.repeat(np.arange(n), k), nbrs.ravel()] = True
    adj = (directed | directed.T) if mode == "symmetric" else (directed & directed.T)
    i, j = np.nonzero(np.triu(adj, 1))
    return np.column_stack([i, j])


def kernel_weights(points, edges, s: float = 1.0, rule: str = "knn_symmetric", k: Optional[int] = None) -> WeightedGraph:
    """Weight each edge by exp(-s * ||x_i - x_j||)."""
    if not s > 0:
        raise InvalidParameterError(f"kernel scale s must be positive, got {s!r}")
    x = np.asarray(points, dtype=float)
    n = x.shape[0]
    edges = np.asarray(edges, dtype=int).reshape(-1, 2)
    if edges.size and (edges.min() < 0 or edges.max() >= n or np.any(edges[:, 0] == edges[:, 1])):
        raise InvalidParameterError("edges must join distinct existing nodes")
    W = np.zeros((n, n))
    if edges.size:
        i, j = edges[:, 0], edges[:, 1]
        w = np.exp(-s * np.sqrt(np.sum((x[i] - x[j]) ** 2, axis=1)))
        W[i, j] = w
        W[j, i] = w
    return WeightedGraph(W, rule, k, float(s))


def knn_graph(points, k: int, s: float = 1.0, mode: str = "symmetric") -> WeightedGraph:
    edges = knn_edges(points, k, mode)
    return kernel_weights(points, edges, s, rule="knn_" + mode, k=k)


def full_kernel_matrix(points, s: float = 1.0) -> WeightedGraph:
    """Kernel weights on every pair of distinct points."""
    if not s > 0:
        raise InvalidParameterError(f"kernel scale s must be positive, got {s!r}")
    W = np.exp(-s * pairwise_distances(points))
    np.fill_diagonal(W, 0.0)
    return WeightedGraph(W, "full", None, float(s))


def isolated_nodes(g: WeightedGraph) -> np.ndarray:
    return np.flatnonzero(g.degrees() <= 0)


def laplacian(g: WeightedGraph) -> np.ndarray:
    """Normalized symmetric Laplacian I - D^{-1/2} W D^{-1/2}."""
    deg = g.degrees()
    iso = np.flatnonzero(deg <= 0)
    if iso.size:
        raise IsolatedNodeError(iso)
    r = 1.0 / np.sqrt(deg)
    # w_ij * (r_i r_j) is bitwise symmetric because both factors are
    L = -(g.weights * np.outer(r, r))
    L[np.diag_indices_from(L)] = 1.0
    return L


def connected_components(edges, n_nodes: int) -> np.ndarray:
    """Union-find component labels; each node is labelled by the smallest index in its component."""
    parent = np.arange(n_nodes)

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    for a, b in np.asarray(edges, dtype=int).reshape(-1, 2):
        ra, rb = find(a), find(b)
        if ra != rb:
            # the smaller root wins so roots are component minima
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb
    return np.array([find(a) for a in range(n_nodes)], dtype=int)


def component_count(labels) -> int:
    return int(np.unique(labels).size)
