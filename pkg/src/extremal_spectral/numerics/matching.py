"""Optimal one-to-one matching of estimated centers to reference centers."""
import numpy as np
from scipy.optimize import linear_sum_assignment

from ..errors import InvalidParameterError


def best_matching(estimated, truth, allow_unequal=False):
    """Match rows of ``estimated`` to rows of ``truth`` minimising summed squared distance.

    Returns ``(perm, cost)`` where ``estimated[perm[j]]`` is matched to
    ``truth[j]`` and ``cost`` is the Frobenius norm of the matched difference.
    With ``allow_unequal`` a larger estimate set is truncated to its best
    matching subset.
    """
    est = np.atleast_2d(np.asarray(estimated, dtype=float))
    tru = np.atleast_2d(np.asarray(truth, dtype=float))
    if est.shape[1] != tru.shape[1]:
        raise InvalidParameterError("estimated and truth must have the same dimension")
    if est.shape[0] != tru.shape[0] and not (allow_unequal and est.shape[0] > tru.shape[0]):
        raise InvalidParameterError(f"atom count mismatch: {est.shape[0]} estimated vs {tru.shape[0]} true")
    diff = est[:, None, :] - tru[None, :, :]
    cost = np.einsum("ijk,ijk->ij", diff, diff)
    # an empty cluster has a NaN center; make it the worst possible partner
    cost = np.where(np.isfinite(cost), cost, 1e12)
    rows, cols = linear_sum_assignment(cost)
    perm = np.empty(tru.shape[0], dtype=int)
    perm[cols] = rows
    return perm, float(np.linalg.norm(est[perm] - tru))
