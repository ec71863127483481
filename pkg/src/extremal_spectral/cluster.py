"""Spectral clustering of extremal angles and the resulting atom/mass estimates."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidParameterError
from .extremal import ExtremalSample
from .graph import WeightedGraph, full_kernel_matrix, isolated_nodes, knn_graph, laplacian
from .numerics import kmeans, sym_eigen
from .numerics.kmeans import DEFAULT_MAX_ITER, DEFAULT_RESTARTS, DEFAULT_TOL
from .variates import RandomStream

EIGENSOLVERS = ("lapack", "jacobi")
ZERO_ROW_TOL = 1e-12


def choose_k_n(N_n: int, tau: float) -> int:
    """Neighbour count ceil(N_n / (tau log N_n)) + 1."""
    if int(N_n) != N_n or N_n < 2:
        raise InvalidParameterError(f"N_n must be an integer >= 2, got {N_n!r}")
    if not tau > 1:
        raise InvalidParameterError(f"tau must exceed 1, got {tau!r}")
    return int(math.ceil(N_n / (tau * math.log(N_n)))) + 1


def row_normalize(U):
    """Scale each row to unit norm; rows with norm below 1e-12 stay zero and are flagged."""
    U = np.asarray(U, dtype=float)
    norms = np.linalg.norm(U, axis=1)
    zero = norms < ZERO_ROW_TOL
    V = np.zeros_like(U)
    V[~zero] = U[~zero] / norms[~zero, None]
    return V, zero


def eigh(M, eigensolver="lapack"):
    """Ascending eigenvalues and matching eigenvectors of a symmetric matrix."""
    if eigensolver == "lapack":
        return np.linalg.eigh(M)
    if eigensolver == "jacobi":
        dec = sym_eigen(M)
        return dec.eigenvalues, dec.eigenvectors
    raise InvalidParameterError(f"eigensolver must be one of {EIGENSOLVERS}")


def _canonical(labels):
    # relabel so cluster ids follow the smallest member position
    out = np.full(labels.shape, -1, dtype=int)
    nxt = 0
    mapping = {}
    for pos, lab in enumerate(labels):
        if lab < 0:
            continue
        if lab not in mapping:
            mapping[lab] = nxt
            nxt += 1
        out[pos] = mapping[lab]
    return out


@dataclass
class GraphPartition:
    labels: np.ndarray        # per node, -1 for isolated nodes
    eigenvalues: np.ndarray   # Laplacian spectrum of the non-isolated subgraph
    isolated: np.ndarray
    zero_rows: np.ndarray     # node indices whose spectral embedding row vanished


def spectral_partition(g: WeightedGraph, m: int, stream=None, eigensolver="lapack",
                       restarts=DEFAULT_RESTARTS, tol=DEFAULT_TOL, max_iter=DEFAULT_MAX_ITER) -> GraphPartition:
    """Normalized spectral clustering of a weighted graph into ``m`` groups.

    Isolated nodes are removed first and labelled -1.
    """
    if int(m) != m or m < 1:
        raise InvalidParameterError(f"m must be a positive integer, got {m!r}")
    stream = stream or RandomStream(0)
    iso = isolated_nodes(g)
    kept = np.setdiff1d(np.arange(g.n_nodes), iso)
    if m > kept.size:
        raise InvalidParameterError(f"m={m} exceeds the {kept.size} non-isolated nodes")
    L = laplacian(g.subgraph(kept))
    values, vectors = eigh(L, eigensolver)
    V, zero = row_normalize(vectors[:, :m])
    km = kmeans(V, m, restarts=restarts, tol=tol, max_iter=max_iter, stream=stream.substream("spectral-kmeans"))
    labels = np.full(g.n_nodes, -1, dtype=int)
    labels[kept] = km.labels
    return GraphPartition(_canonical(labels), values, iso, kept[zero])


@dataclass
class ClusteringResult:
    labels: np.ndarray              # per extreme, -1 for stripped singletons
    m: int
    laplacian_eigenvalues: np.ndarray
    atoms_hat: np.ndarray           # m x d
    masses_hat: np.ndarray          # m, cluster share of N_n
    singletons: np.ndarray          # positions of stripped isolated nodes
    metadata: dict = field(default_factory=dict)

    @property
    def singleton_mass(self) -> float:
        return self.singletons.size / self.labels.size if self.labels.size else 0.0


def estimate_atoms(angles, labels, m):
    """Normalized cluster means and cluster shares of all points."""
    angles = np.asarray(angles, dtype=float)
    N = angles.shape[0]
    atoms = np.full((m, angles.shape[1]), np.nan)
    masses = np.zeros(m)
    for j in range(m):
        members = labels == j
        cnt = int(members.sum())
        masses[j] = cnt / N
        if cnt:
            mean = angles[members].mean(axis=0)
            norm = np.linalg.norm(mean)
            atoms[j] = mean / norm if norm > 0 else mean
    return atoms, masses


def spectral_cluster(extremes: ExtremalSample, m: int, k_n: int, s: float = 1.0, mode: str = "symmetric",
                     stream=None, eigensolver="lapack", restarts=DEFAULT_RESTARTS, tol=DEFAULT_TOL,
                     max_iter=DEFAULT_MAX_ITER) -> ClusteringResult:
    """Cluster extremal angles on their k_n-NN graph and estimate atoms and masses."""
    angles = extremes.angles if isinstance(extremes, ExtremalSample) else np.asarray(extremes, dtype=float)
    stream = stream or RandomStream(0)
    g = knn_graph(angles, k_n, s, mode)
    part = spectral_partition(g, m, stream, eigensolver, restarts, tol, max_iter)
    atoms, masses = estimate_atoms(angles, part.labels, m)
    meta = {
        "k_n": int(k_n), "s": float(s), "rule": g.rule, "mode": mode, "eigensolver": eigensolver,
        "kmeans": "lloyd+kmeans++", "restarts": restarts, "seed": stream.seed, "stream_path": list(stream.path),
        "zero_rows": part.zero_rows.tolist(),
    }
    return ClusteringResult(part.labels, int(m), part.eigenvalues, atoms, masses, part.isolated, meta)


def screeplot(extremes, s: float = 1.0, eigensolver="lapack") -> np.ndarray:
    """Eigenvalues of the fully connected kernel matrix, largest first."""
    angles = extremes.angles if isinstance(extremes, ExtremalSample) else np.asarray(extremes, dtype=float)
    if angles.shape[0] < 2:
        raise InvalidParameterError("screeplot needs at least two points")
    values, _ = eigh(full_kernel_matrix(angles, s).weights, eigensolver)
    return values[::-1].copy()
