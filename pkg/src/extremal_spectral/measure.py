"""Theoretical angular measures, the limiting law of extremal deviations,
signal-to-noise accounting and estimation-error metrics.

Factor and atom indices are 0-based throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.stats import ks_2samp

from .errors import InvalidParameterError, MissingLatentsError
from .numerics import best_matching
from .variates import FACTOR_LAWS, SampleMatrix, _factors, ma_loading_matrix, sample_pareto

MERGE_TOL = 1e-10


@dataclass
class AngularMeasure:
    atoms: np.ndarray      # K x d unit vectors
    masses: np.ndarray     # K
    continuous_mass: float = 0.0  # uniform-on-the-sphere component

    @property
    def K(self) -> int:
        return self.masses.size

    def total_mass(self) -> float:
        return float(self.masses.sum() + self.continuous_mass)


def _column_norms(A):
    A = np.atleast_2d(np.asarray(A, dtype=float))
    norms = np.linalg.norm(A, axis=0)
    if np.any(norms <= 0):
        raise InvalidParameterError("A has a zero column")
    return A, norms


def _merge(atoms, masses):
    out_atoms, out_masses = [], []
    for a, m in zip(atoms, masses):
        for i, b in enumerate(out_atoms):
            if np.max(np.abs(a - b)) <= MERGE_TOL:
                out_masses[i] += m
                break
        else:
            out_atoms.append(a)
            out_masses.append(m)
    return np.array(out_atoms), np.array(out_masses)


def lfm_angular_measure(A, alpha: float, case: str = "nonnegative") -> AngularMeasure:
    """Atoms a_k/||a_k|| with masses ||a_k||^alpha / sum_k ||a_k||^alpha.

    The symmetric case places half of each mass at +c_k and half at -c_k.
    Coinciding atoms are merged.
    """
    A, norms = _column_norms(A)
    if not alpha > 0:
        raise InvalidParameterError("alpha must be positive")
    if case == "nonnegative":
        if np.any(A < 0):
            raise InvalidParameterError("nonnegative case requires A >= 0")
        atoms = (A / norms).T
        masses = norms**alpha / np.sum(norms**alpha)
    elif case == "symmetric":
        c = (A / norms).T
        half = 0.5 * norms**alpha / np.sum(norms**alpha)
        atoms = np.empty((2 * c.shape[0], c.shape[1]))
        atoms[0::2], atoms[1::2] = c, -c
        masses = np.repeat(half, 2)
    else:
        raise InvalidParameterError(f"unknown case {case!r}")
    atoms, masses = _merge(atoms, masses)
    return AngularMeasure(atoms, masses, 0.0)


def expected_gaussian_norm(d: int) -> float:
    """E||N|| for N standard normal in R^d: sqrt(2) Gamma((d+1)/2) / Gamma(d/2)."""
    if int(d) != d or d < 1:
        raise InvalidParameterError("d must be a positive integer")
    return math.sqrt(2.0) * math.exp(math.lgamma((d + 1) / 2.0) - math.lgamma(d / 2.0))


def noisy_lfm_angular_measure(A, sigma: float, d=None, alpha: float = 1.0) -> AngularMeasure:
    """Angular measure of A Z + sigma * eta * N with alpha = 1.

    Discrete atoms carry ||a_k|| / w and the uniform part carries
    sigma E||N|| / w, where w = sum_k ||a_k|| + sigma E||N||.
    """
    if alpha != 1:
        raise InvalidParameterError("the noisy-model measure is only available for alpha = 1")
    if not sigma >= 0:
        raise InvalidParameterError("sigma must be >= 0")
    A, norms = _column_norms(A)
    d = A.shape[0] if d is None else d
    noise = sigma * expected_gaussian_norm(d)
    w = norms.sum() + noise
    atoms, masses = _merge((A / norms).T, norms / w)
    return AngularMeasure(atoms, masses, noise / w)


def ma_angular_measure(coeffs, alpha: float, embed_dim: int) -> AngularMeasure:
    """Symmetric measure of the lag-embedded MA process via its banded loadings."""
    if int(embed_dim) != embed_dim or embed_dim < 2:
        raise InvalidParameterError("embed_dim must be an integer >= 2")
    return lfm_angular_measure(ma_loading_matrix(coeffs, embed_dim), alpha, "symmetric")


def theorem1_limit_sampler(A, alpha: float, j: int, factor_law: str, count: int, stream,
                           case: str = "nonnegative") -> np.ndarray:
    """Draws from the limit law of u_n (X/||X|| - c_j) given a factor-j extreme.

    Each row is S* / (||a_j||^2 W) with W ~ Pareto(alpha),
    X_{-j} = sum_{m != j} a_m Z_m and
    S*_l = sum_i (a_ij^2 X_{l,-j} - a_lj a_ij X_{i,-j}).
    """
    A, norms = _column_norms(A)
    d, p = A.shape
    if int(j) != j or not 0 <= j < p:
        raise InvalidParameterError(f"factor index must lie in [0, {p}), got {j!r}")
    if factor_law not in FACTOR_LAWS:
        raise InvalidParameterError(f"factor_law must be one of {FACTOR_LAWS}")
    W = sample_pareto(stream, alpha, count)
    others = [m for m in range(p) if m != j]
    if not others:
        return np.zeros((count, d))
    Z = _factors(stream, factor_law, alpha, case, (count, len(others)))
    X_minus = Z @ A[:, others].T
    a = A[:, j]
    s_star = norms[j] ** 2 * X_minus - np.outer(X_minus @ a, a)
    return s_star / (norms[j] ** 2 * W)[:, None]


def linear_constraint_residual(A, j, deviations) -> np.ndarray:
    """|sum_l a_lj D_l| / max(1, ||a_j|| ||D||) per row; zero in exact arithmetic."""
    A = np.asarray(A, dtype=float)
    D = np.asarray(deviations, dtype=float)
    a = A[:, j]
    scale = np.maximum(1.0, np.linalg.norm(a) * np.linalg.norm(D, axis=1))
    return np.abs(D @ a) / scale


def empirical_deviation_sample(sample: SampleMatrix, A, alpha: float, u_n: float, j: int) -> np.ndarray:
    """u_n (X_i/||X_i|| - c_j) over rows with ||X_i|| > u_n and Z_ij > u_n / w^(1/alpha)."""
    if not u_n > 0:
        raise InvalidParameterError("u_n must be positive")
    if sample.Z is None:
        raise MissingLatentsError("deviation sample needs latent factors")
    A, norms = _column_norms(A)
    if not 0 <= j < A.shape[1]:
        raise InvalidParameterError("factor index out of range")
    w = float(np.sum(norms**alpha))
    radii = np.linalg.norm(sample.X, axis=1)
    rows = (radii > u_n) & (sample.Z[:, j] > u_n / w ** (1.0 / alpha))
    c = A[:, j] / norms[j]
    return u_n * (sample.X[rows] / radii[rows, None] - c)


def coordinate_ks(a, b) -> np.ndarray:
    """Two-sample Kolmogorov-Smirnov distance for each coordinate."""
    a = np.atleast_2d(a)
    b = np.atleast_2d(b)
    if a.shape[0] == 0 or b.shape[0] == 0:
        return np.full(a.shape[1], np.nan)
    return np.array([ks_2samp(a[:, c], b[:, c]).statistic for c in range(a.shape[1])])


def snr(A, sigma: float, d=None, decimals=None) -> float:
    """Share of angular mass carried by the signal: sum||a_k|| / (sum||a_k|| + sigma E||N||).

    ``decimals`` rounds the ratio, e.g. 3 to match three-decimal tables.
    """
    if not sigma >= 0:
        raise InvalidParameterError("sigma must be >= 0")
    A, norms = _column_norms(A)
    d = A.shape[0] if d is None else d
    signal = norms.sum()
    value = signal / (signal + sigma * expected_gaussian_norm(d))
    return round(value, decimals) if decimals is not None else float(value)


def ess(snr_value: float, N_n: int) -> int:
    """Effective sample size SNR * N_n, rounded half up."""
    return int(math.floor(snr_value * N_n + 0.5))


def _atoms_of(x):
    return x.atoms if isinstance(x, AngularMeasure) else np.atleast_2d(np.asarray(x, dtype=float))


def center_error(estimated, truth, truncate: bool = False) -> float:
    """Frobenius norm of the best-matched difference between atom sets.

    With ``truncate`` a larger estimated set is reduced to its best-matching
    subset (e.g. a noise cluster); otherwise counts must agree.
    """
    _, cost = best_matching(_atoms_of(estimated), _atoms_of(truth), allow_unequal=truncate)
    return cost


def matched_mass_error(est_atoms, est_masses, truth: AngularMeasure, truncate: bool = False) -> float:
    """max_j |pi_hat_j - pi_j| after matching atoms."""
    perm, _ = best_matching(_atoms_of(est_atoms), truth.atoms, allow_unequal=truncate)
    return float(np.max(np.abs(np.asarray(est_masses)[perm] - truth.masses)))
