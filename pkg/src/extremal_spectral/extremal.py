"""Radial thresholding, angular parts, marginal standardization and the
theoretical threshold sequences.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DegenerateSampleError, InvalidParameterError, MissingLatentsError
from .variates import SampleMatrix


@dataclass
class ExtremalSample:
    """Exceedances of a radial threshold and their angular parts."""

    u_n: float
    indices: np.ndarray  # original row indices, ordered by decreasing radius
    radii: np.ndarray
    angles: np.ndarray   # N_n x d unit vectors
    n: int

    @property
    def N_n(self) -> int:
        return int(self.indices.size)

    @property
    def d(self) -> int:
        return self.angles.shape[1]


def _as_matrix(X):
    return np.asarray(X.X if isinstance(X, SampleMatrix) else X, dtype=float)


def marginal_rank_transform(X):
    """Map every column to the common scale 1 / (1 - rank / (n + 1)).

    Ranks run from 1 to n within each column; ties keep the original row
    order.  The sample maximum maps to n + 1.
    """
    data = _as_matrix(X)
    n = data.shape[0]
    if data.ndim != 2 or n < 2:
        raise InvalidParameterError("rank transform needs a 2-D array with at least 2 rows")
    order = np.argsort(data, axis=0, kind="stable")
    ranks = np.empty_like(order)
    np.put_along_axis(ranks, order, np.arange(1, n + 1)[:, None].repeat(data.shape[1], axis=1), axis=0)
    Y = (n + 1.0) / (n + 1.0 - ranks)
    if isinstance(X, SampleMatrix):
        return SampleMatrix(X=Y, meta={**X.meta, "rank_transformed": True})
    return Y


def _select(data, n_keep):
    radii = np.sqrt(np.einsum("ij,ij->i", data, data))
    positive = np.flatnonzero(radii > 0)
    if positive.size == 0:
        raise DegenerateSampleError("all radii are zero")
    # decreasing radius, lower original index first among equal radii
    order = positive[np.lexsort((positive, -radii[positive]))]
    keep = order[: min(n_keep, order.size)]
    if keep.size == 0:
        raise DegenerateSampleError("no observation exceeds the threshold")
    r_min = radii[keep[-1]]
    below = radii[radii < r_min]
    u_n = float(below.max()) if below.size else 0.0
    angles = data[keep] / radii[keep, None]
    return u_n, keep, radii[keep], angles


def select_extremes(X, beta: Optional[float] = None, top: Optional[int] = None) -> ExtremalSample:
    """Keep the observations with the largest Euclidean norms.

    Exactly one of ``beta`` (empirical quantile level, order statistic at
    index ceil(beta * n)) or ``top`` (number of exceedances) must be given.
    Rows of zero norm are never retained.  ``u_n`` is reported as the largest
    radius strictly below every retained radius, so ties at the cut never
    break strict exceedance.
    """
    data = _as_matrix(X)
    if data.ndim != 2:
        raise InvalidParameterError("X must be 2-D")
    n = data.shape[0]
    if n < 2:
        raise InvalidParameterError("need at least 2 rows")
    if (beta is None) == (top is None):
        raise InvalidParameterError("give exactly one of beta or top")
    if beta is not None:
        if not 0 <= beta < 1:
            raise InvalidParameterError(f"beta must lie in [0, 1), got {beta!r}")
        # small slack absorbs beta values like 0.984 that are not exact in binary
        k = math.ceil(beta * n - 1e-9)
        n_keep = n - k
    else:
        if int(top) != top or not 1 <= top < n:
            raise InvalidParameterError(f"top must be an integer in [1, n), got {top!r}")
        n_keep = int(top)
    u_n, keep, radii, angles = _select(data, n_keep)
    return ExtremalSample(u_n=u_n, indices=keep, radii=radii, angles=angles, n=n)


def threshold_extremes(X, u_n: float) -> ExtremalSample:
    """All observations with norm strictly above a fixed threshold ``u_n``.

    May return an empty sample.
    """
    data = _as_matrix(X)
    if not u_n > 0:
        raise InvalidParameterError("u_n must be positive")
    radii = np.sqrt(np.einsum("ij,ij->i", data, data))
    hit = np.flatnonzero(radii > u_n)
    keep = hit[np.lexsort((hit, -radii[hit]))]
    angles = data[keep] / radii[keep, None] if keep.size else np.zeros((0, data.shape[1]))
    return ExtremalSample(u_n=float(u_n), indices=keep, radii=radii[keep], angles=angles, n=data.shape[0])


def default_threshold_exponent(alpha: float) -> float:
    """Midpoint of the admissible interval ((a+2)/(a(a+3)), 1/a) for u_n = n**gamma."""
    if not alpha > 0:
        raise InvalidParameterError("alpha must be positive")
    lower = (alpha + 2.0) / (alpha * (alpha + 3.0))
    return 0.5 * (lower + 1.0 / alpha)


def threshold_exponent_interval(alpha: float) -> tuple:
    return (alpha + 2.0) / (alpha * (alpha + 3.0)), 1.0 / alpha


def h_sequence(n, u_n, alpha):
    """h_n = u_n**((alpha-1)/4) * n**((2-alpha)/(4 alpha))."""
    if not np.all(np.asarray(u_n) > 0):
        raise InvalidParameterError("u_n must be positive")
    return np.asarray(u_n, dtype=float) ** ((alpha - 1.0) / 4.0) * np.asarray(n, dtype=float) ** ((2.0 - alpha) / (4.0 * alpha))


def h_growth_exponents(alpha: float, gamma: Optional[float] = None) -> dict:
    """Exponents of n in the four rate conditions on h_n when u_n = n**gamma.

    With h_n = n**e_h the conditions read e_h > 0, e_h < gamma,
    e_h < gamma*(alpha+1)/2 - 1/2 and gamma + e_h - 1/alpha > 0.  The returned
    margins must all be positive.
    """
    g = default_threshold_exponent(alpha) if gamma is None else gamma
    e_h = g * (alpha - 1.0) / 4.0 + (2.0 - alpha) / (4.0 * alpha)
    return {
        "h_to_infinity": e_h,
        "h_little_o_u": g - e_h,
        "h_little_o_root": g * (alpha + 1.0) / 2.0 - 0.5 - e_h,
        "u_h_over_n": g + e_h - 1.0 / alpha,
    }


def a_star(A) -> float:
    """sqrt(d) times the largest absolute loading."""
    A = np.asarray(A, dtype=float)
    return math.sqrt(A.shape[0]) * float(np.max(np.abs(A)))


@dataclass
class FactorAttribution:
    labels: np.ndarray      # factor index per extreme, -1 when not unique
    b_n: bool               # no extreme has two factors above h_n
    multi_exceed: np.ndarray  # per extreme: more than one factor above h_n
    signs: np.ndarray       # sign of the attributed factor (symmetric case)


def factor_attribution(sample: SampleMatrix, extremes: ExtremalSample, h_n: float, a_star_value: float,
                       symmetric: bool = False) -> FactorAttribution:
    """Attribute each extreme to the latent factor that exceeds u_n / a*.

    In the symmetric case factor magnitudes are compared and the sign of the
    attributed factor is reported.
    """
    if sample.Z is None:
        raise MissingLatentsError("factor attribution needs the latent factor matrix")
    Z = sample.Z[extremes.indices]
    mag = np.abs(Z) if symmetric else Z
    big = mag > extremes.u_n / a_star_value
    labels = np.where(big.sum(axis=1) == 1, np.argmax(big, axis=1), -1)
    multi = (mag > h_n).sum(axis=1) > 1
    rows = np.arange(Z.shape[0])
    signs = np.where(labels >= 0, np.sign(Z[rows, np.maximum(labels, 0)]), 0.0)
    return FactorAttribution(labels=labels, b_n=not bool(np.any(multi)), multi_exceed=multi, signs=signs)


def center_distance_bound(A, alpha, j, h_n, u_n) -> float:
    """Upper bound 8 a*^2 / ||a_j||^alpha * h_n / u_n on the distance of a
    factor-j extreme's angle to its atom."""
    A = np.asarray(A, dtype=float)
    return 8.0 * a_star(A) ** 2 / np.linalg.norm(A[:, j]) ** alpha * h_n / u_n


def center_bound_violations(sample: SampleMatrix, extremes: ExtremalSample, attribution: FactorAttribution,
                            alpha: float, h_n: float) -> tuple:
    """Count labelled extremes whose angle is farther from its atom than the bound.

    Returns ``(violations, checked)``.
    """
    if sample.A is None:
        raise MissingLatentsError("bound check needs the loading matrix")
    A = sample.A
    lab = attribution.labels
    ok = lab >= 0
    if not np.any(ok):
        return 0, 0
    cols = A[:, lab[ok]].T
    centers = cols / np.linalg.norm(cols, axis=1)[:, None]
    centers = centers * attribution.signs[ok][:, None]
    dist = np.linalg.norm(extremes.angles[ok] - centers, axis=1)
    bounds = np.array([center_distance_bound(A, alpha, j, h_n, extremes.u_n) for j in lab[ok]])
    return int(np.sum(dist > bounds)), int(ok.sum())
