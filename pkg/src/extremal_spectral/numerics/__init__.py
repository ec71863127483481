"""Numerical kernels: Jacobi eigensolver, k-means variants, center matching.

The inner loops live in a compiled extension when it is available; see
``BACKEND`` for which one was loaded.
"""
from ._backend import BACKEND
from .eigen import EigenDecomposition, sym_eigen
from .kmeans import KMeansResult, kmeans, kmeans_pp_init, spherical_kmeans
from .matching import best_matching

__all__ = [
    "BACKEND",
    "EigenDecomposition",
    "KMeansResult",
    "best_matching",
    "kmeans",
    "kmeans_pp_init",
    "spherical_kmeans",
    "sym_eigen",
]
