import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremal_spectral.errors import InvalidParameterError, IsolatedNodeError
from extremal_spectral.graph import (WeightedGraph, component_count, connected_components, full_kernel_matrix,
                                     kernel_weights, knn_edges, knn_graph, laplacian, pairwise_distances)
from oracles import bfs_components, eigenvalues_by_bisection, same_partition


def sphere_points(rng, n, d=3):
    x = rng.standard_normal((n, d))
    return x / np.linalg.norm(x, axis=1)[:, None]


def test_equidistant_tie_break():
    pts = np.array([[1.0, 0, 0], [0, 1.0, 0], [0, 0, 1.0]])
    assert knn_edges(pts, 1).tolist() == [[0, 1], [0, 2]]


def test_two_separated_clusters():
    rng = np.random.default_rng(0)
    a = np.array([1.0, 0, 0]) + 0.01 * rng.standard_normal((5, 3))
    b = np.array([0, 0, 1.0]) + 0.01 * rng.standard_normal((5, 3))
    pts = np.vstack([a, b])
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    edges = knn_edges(pts, 4)
    assert not np.any((edges[:, 0] < 5) & (edges[:, 1] >= 5))
    assert component_count(connected_components(edges, 10)) == 2


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(3, 30), k_frac=st.floats(0.0, 1.0))
def test_mutual_subset_of_symmetric(seed, n, k_frac):
    pts = sphere_points(np.random.default_rng(seed), n)
    k = 1 + int(k_frac * (n - 2))
    sym = {tuple(e) for e in knn_edges(pts, k, "symmetric")}
    mut = {tuple(e) for e in knn_edges(pts, k, "mutual")}
    assert mut <= sym
    # every node keeps at least its k out-neighbours in symmetric mode
    deg = np.bincount(np.array(sorted(sym)).ravel(), minlength=n)
    assert np.all(deg >= k)


@pytest.mark.parametrize("k", [0, 5, 2.5])
def test_knn_rejects_bad_k(k):
    with pytest.raises(InvalidParameterError):
        knn_edges(np.eye(5), k)


def test_kernel_weight_values():
    pts = np.array([[1.0, 0], [1.0, 0], [-1.0, 0]])
    g = kernel_weights(pts, [[0, 1], [0, 2]], s=1.0)
    assert g.weights[0, 1] == 1.0
    assert g.weights[0, 2] == pytest.approx(np.exp(-2.0))
    assert g.weights[2, 0] == g.weights[0, 2]


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6), s=st.floats(0.1, 20))
def test_weights_match_kernel_and_are_monotone(seed, s):
    pts = sphere_points(np.random.default_rng(seed), 15)
    g = knn_graph(pts, 4, s)
    assert np.array_equal(g.weights, g.weights.T) and np.all(np.diag(g.weights) == 0)
    i, j = np.nonzero(g.weights)
    dist = np.linalg.norm(pts[i] - pts[j], axis=1)
    assert np.allclose(g.weights[i, j], np.exp(-s * dist), rtol=1e-12)
    order = np.argsort(dist)
    assert np.all(np.diff(g.weights[i, j][order]) <= 1e-15)


def test_bad_kernel_scale_and_edges():
    with pytest.raises(InvalidParameterError):
        kernel_weights(np.eye(3), [[0, 1]], s=0.0)
    with pytest.raises(InvalidParameterError):
        kernel_weights(np.eye(3), [[0, 0]])
    with pytest.raises(InvalidParameterError):
        kernel_weights(np.eye(3), [[0, 5]])


def test_full_kernel_matrix():
    pts = sphere_points(np.random.default_rng(1), 6)
    g = full_kernel_matrix(pts, 2.0)
    expected = np.exp(-2.0 * pairwise_distances(pts))
    np.fill_diagonal(expected, 0)
    assert np.allclose(g.weights, expected) and g.rule == "full"


def test_pairwise_distances_exactly_symmetric():
    D = pairwise_distances(sphere_points(np.random.default_rng(2), 40))
    assert np.array_equal(D, D.T) and np.all(np.diag(D) == 0)


def _graph(n, edges, w=1.0):
    W = np.zeros((n, n))
    for i, j in edges:
        W[i, j] = W[j, i] = w
    return WeightedGraph(W, "full")


def test_laplacian_spectra():
    vals = np.linalg.eigvalsh(laplacian(_graph(4, [(0, 1), (2, 3)])))
    assert np.sum(np.abs(vals) < 1e-12) == 2
    L3 = laplacian(_graph(3, [(0, 1), (1, 2), (0, 2)]))
    assert np.allclose(eigenvalues_by_bisection(L3), [0, 1.5, 1.5], atol=1e-9)
    assert np.allclose(np.linalg.eigvalsh(laplacian(_graph(2, [(0, 1)], 0.3))), [0, 2])


def test_laplacian_rejects_isolated():
    with pytest.raises(IsolatedNodeError) as exc:
        laplacian(_graph(3, [(0, 1)]))
    assert exc.value.nodes == [2]


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10**6))
def test_laplacian_psd_and_symmetric(seed):
    pts = sphere_points(np.random.default_rng(seed), 25)
    L = laplacian(knn_graph(pts, 3))
    assert np.array_equal(L, L.T)
    vals = np.linalg.eigvalsh(L)
    assert vals.min() > -1e-10 and vals.max() < 2 + 1e-10


def test_components_simple_cases():
    assert component_count(connected_components(np.zeros((0, 2)), 4)) == 4
    assert component_count(connected_components([(0, 1), (1, 2), (2, 3)], 4)) == 1


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10**6), n=st.integers(1, 40), m=st.integers(0, 60))
def test_components_match_bfs(seed, n, m):
    rng = np.random.default_rng(seed)
    edges = rng.integers(0, n, (m, 2))
    edges = edges[edges[:, 0] != edges[:, 1]]
    labels = connected_components(edges, n)
    assert same_partition(labels, bfs_components(edges.tolist(), n))
    assert all(labels[i] == min(np.flatnonzero(labels == labels[i])) for i in range(n))
