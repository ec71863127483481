"""Dense symmetric eigendecomposition by cyclic Jacobi rotations."""
from dataclasses import dataclass

import numpy as np

from ..errors import InvalidParameterError, NumericalFailure
from . import _backend


@dataclass
class EigenDecomposition:
    eigenvalues: np.ndarray   # ascending
    eigenvectors: np.ndarray  # column i pairs with eigenvalues[i]
    sweeps: int = 0


def sym_eigen(M, tol=1e-12, max_sweeps=100, backend=None) -> EigenDecomposition:
    """Full spectrum of a symmetric matrix.

    Iterates until the off-diagonal Frobenius mass drops below
    ``tol * ||M||_F``.  Eigenvalues are returned in ascending order; equal
    eigenvalues keep the order of their diagonal positions.

    Raises
    ------
    InvalidParameterError
        If ``M`` is not square or deviates from symmetry by more than 1e-10
        (relative to ``max(1, ||M||_F)``).
    NumericalFailure
        If ``max_sweeps`` sweeps do not reach the tolerance.
    """
    M = np.asarray(M, dtype=float)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise InvalidParameterError(f"expected a square matrix, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise InvalidParameterError("matrix has non-finite entries")
    n = M.shape[0]
    fro = float(np.linalg.norm(M))
    if np.max(np.abs(M - M.T), initial=0.0) > 1e-10 * max(1.0, fro):
        raise InvalidParameterError("matrix is not symmetric")
    a = np.ascontiguousarray(0.5 * (M + M.T))
    vt = np.eye(n)
    if n == 0:
        return EigenDecomposition(np.zeros(0), np.zeros((0, 0)))
    kernels = _backend.kernels if backend is None else backend
    sweeps, off = kernels.jacobi_sweeps(a, vt, tol * fro, int(max_sweeps))
    if off >= tol * fro and off > 0:
        raise NumericalFailure(f"Jacobi did not converge in {max_sweeps} sweeps", off)
    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    return EigenDecomposition(w[order], vt[order].T.copy(), sweeps)
