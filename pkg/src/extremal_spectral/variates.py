"""Seeded random variates and the data-generating models.

All samplers draw from a :class:`RandomStream`.  Fréchet and Pareto variates
use the exact inverse transform of the stream's uniforms, so paired
experiments driven by the same stream are monotonically coupled.
"""
from __future__ import annotations

import hashlib
import math
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .errors import InvalidParameterError

FACTOR_LAWS = ("frechet", "pareto", "symmetric_stable")
CASES = ("nonnegative", "symmetric")

# Loadings of the four-dimensional two-factor example used throughout the
# simulation study.
EXAMPLE_LOADINGS = np.array([[0.1, 0.9], [0.2, 0.8], [0.3, 0.7], [0.4, 0.6]])
# Y_t = Z_t + .5 Z_{t-1} - .6 Z_{t-2} + 1.5 Z_{t-3}
MA3_COEFFS = (1.0, 0.5, -0.6, 1.5)

_U64 = 2**64


def _label_key(label) -> int:
    digest = hashlib.sha256(f"{type(label).__name__}:{label!r}".encode()).digest()
    return int.from_bytes(digest[:4], "little")


class RandomStream:
    """Deterministic, splittable random stream.

    Parameters
    ----------
    seed : int
        Unsigned 64-bit seed.
    path : tuple
        Labels identifying the substream.  ``RandomStream(s).substream("a", 3)``
        always reproduces the same sequence, independently of how far the
        parent stream has been advanced.
    """

    def __init__(self, seed: int = 0, path: tuple = ()):
        seed = int(seed)
        if not 0 <= seed < _U64:
            raise InvalidParameterError(f"seed must be an unsigned 64-bit integer, got {seed}")
        self.seed = seed
        self.path = tuple(path)
        ss = np.random.SeedSequence(entropy=seed, spawn_key=tuple(_label_key(x) for x in self.path))
        self.generator = np.random.Generator(np.random.PCG64(ss))

    def substream(self, *labels) -> "RandomStream":
        return RandomStream(self.seed, self.path + labels)

    def uniform_open(self, size) -> np.ndarray:
        """Uniforms on the open interval (0, 1)."""
        # random() returns k / 2**53 with 0 <= k < 2**53; shift by half a step
        return self.generator.random(size) + 2.0**-54

    def __repr__(self):
        return f"RandomStream(seed={self.seed}, path={self.path!r})"


def _check_alpha(alpha):
    if not (isinstance(alpha, (int, float, np.floating, np.integer)) and alpha > 0 and math.isfinite(alpha)):
        raise InvalidParameterError(f"alpha must be a positive finite number, got {alpha!r}")


def _check_count(count):
    if int(count) != count or count < 1:
        raise InvalidParameterError(f"count must be a positive integer, got {count!r}")


def _check_size(size):
    for c in (size if isinstance(size, tuple) else (size,)):
        _check_count(c)


def frechet_ppf(u, alpha):
    """Inverse of F(x) = exp(-x**-alpha)."""
    _check_alpha(alpha)
    return (-np.log(u)) ** (-1.0 / alpha)


def pareto_ppf_upper(u, alpha):
    """Inverse survival function of P(W > x) = x**-alpha, x >= 1."""
    _check_alpha(alpha)
    return np.asarray(u, dtype=float) ** (-1.0 / alpha)


def sample_frechet(stream: RandomStream, alpha: float, count) -> np.ndarray:
    _check_alpha(alpha)
    _check_size(count)
    return frechet_ppf(stream.uniform_open(count), alpha)


def sample_pareto(stream: RandomStream, alpha: float, count) -> np.ndarray:
    _check_alpha(alpha)
    _check_size(count)
    return pareto_ppf_upper(stream.uniform_open(count), alpha)


def sample_sym_stable(stream: RandomStream, alpha: float, count) -> np.ndarray:
    """Standard symmetric alpha-stable variates (Chambers-Mallows-Stuck).

    Scale convention: alpha=2 gives N(0, 2).  alpha=1 gives standard Cauchy.
    """
    if not (isinstance(alpha, (int, float, np.floating, np.integer)) and 0 < alpha <= 2):
        raise InvalidParameterError(f"alpha must lie in (0, 2], got {alpha!r}")
    _check_size(count)
    v = math.pi * (stream.uniform_open(count) - 0.5)
    w = -np.log(stream.uniform_open(count))
    if alpha == 1:
        return np.tan(v)
    return (np.sin(alpha * v) / np.cos(v) ** (1.0 / alpha)) * (np.cos(v - alpha * v) / w) ** ((1.0 - alpha) / alpha)


def sample_std_normal(stream: RandomStream, count) -> np.ndarray:
    _check_size(count)
    return stream.generator.standard_normal(count)


def hill_estimate(values: np.ndarray, k: int) -> float:
    """Hill estimator of the tail index from the ``k`` largest values."""
    x = np.sort(np.asarray(values, dtype=float))[::-1]
    if not 1 <= k < x.size or x[k] <= 0:
        raise InvalidParameterError("need 1 <= k < len(values) and a positive (k+1)-th order statistic")
    return 1.0 / float(np.mean(np.log(x[:k]) - np.log(x[k])))


@dataclass
class FactorModelSpec:
    """Linear factor model X = A Z + sigma * eta * N."""

    A: np.ndarray
    alpha: float = 1.0
    sigma: float = 0.0
    factor_law: str = "frechet"
    case: str = "nonnegative"

    def __post_init__(self):
        self.A = np.atleast_2d(np.asarray(self.A, dtype=float))
        self.validate()

    @property
    def d(self) -> int:
        return self.A.shape[0]

    @property
    def p(self) -> int:
        return self.A.shape[1]

    def validate(self):
        A = self.A
        if A.ndim != 2 or A.size == 0 or not np.all(np.isfinite(A)):
            raise InvalidParameterError("A must be a finite, non-empty d x p matrix")
        if np.any(np.linalg.norm(A, axis=0) <= 0):
            raise InvalidParameterError("every column of A must have positive norm")
        _check_alpha(self.alpha)
        if not (self.sigma >= 0 and math.isfinite(self.sigma)):
            raise InvalidParameterError(f"sigma must be >= 0, got {self.sigma!r}")
        if self.factor_law not in FACTOR_LAWS:
            raise InvalidParameterError(f"factor_law must be one of {FACTOR_LAWS}")
        if self.case not in CASES:
            raise InvalidParameterError(f"case must be one of {CASES}")
        if self.case == "nonnegative":
            if np.any(A < 0):
                raise InvalidParameterError("nonnegative case requires A >= 0")
            if self.factor_law == "symmetric_stable":
                raise InvalidParameterError("nonnegative case requires a nonnegative factor law")
        if self.factor_law == "symmetric_stable" and self.alpha > 2:
            raise InvalidParameterError("symmetric stable factors need alpha <= 2")


@dataclass
class SampleMatrix:
    """Observations with optional latent quantities retained from simulation."""

    X: np.ndarray
    Z: Optional[np.ndarray] = None
    eta: Optional[np.ndarray] = None
    N: Optional[np.ndarray] = None
    A: Optional[np.ndarray] = None
    sigma: float = 0.0
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def d(self) -> int:
        return self.X.shape[1]

    def reconstruction_error(self) -> float:
        """Max relative entrywise error of X against Z A^T + sigma * (N scaled by eta)."""
        if self.Z is None or self.A is None:
            raise InvalidParameterError("reconstruction needs Z and A")
        rebuilt = self.Z @ self.A.T
        if self.sigma > 0:
            rebuilt = rebuilt + self.sigma * self.N * self.eta[:, None]
        scale = np.maximum(np.abs(self.X), 1.0)
        return float(np.max(np.abs(self.X - rebuilt) / scale))


def _factors(stream, law, alpha, case, shape):
    if law == "symmetric_stable":
        return sample_sym_stable(stream, alpha, shape)
    z = sample_frechet(stream, alpha, shape) if law == "frechet" else sample_pareto(stream, alpha, shape)
    if case == "symmetric":
        z = z * np.where(stream.generator.random(shape) < 0.5, -1.0, 1.0)
    return z


def simulate_lfm(spec: FactorModelSpec, n: int, stream: RandomStream, Z: Optional[np.ndarray] = None) -> SampleMatrix:
    """Draw ``n`` iid rows of X = A Z + sigma * eta * N.

    ``Z`` may be supplied to bypass factor sampling.  The noise multiplier
    eta is standard Fréchet with the model's tail index and N is standard
    normal in R^d.
    """
    spec.validate()
    _check_count(n)
    if Z is None:
        Z = _factors(stream, spec.factor_law, spec.alpha, spec.case, (n, spec.p))
    else:
        Z = np.asarray(Z, dtype=float)
        if Z.shape != (n, spec.p):
            raise InvalidParameterError(f"Z must have shape {(n, spec.p)}, got {Z.shape}")
    X = Z @ spec.A.T
    eta = N = None
    if spec.sigma > 0:
        eta = sample_frechet(stream, spec.alpha, n)
        N = sample_std_normal(stream, (n, spec.d))
        X = X + spec.sigma * N * eta[:, None]
    return SampleMatrix(X=X, Z=Z, eta=eta, N=N, A=spec.A.copy(), sigma=spec.sigma,
                        meta={"model": "lfm", "alpha": spec.alpha, "factor_law": spec.factor_law, "case": spec.case})


def ma_loading_matrix(coeffs: Sequence[float], embed_dim: int) -> np.ndarray:
    """Banded loadings expressing the lag vector of an MA process as A Z."""
    coeffs = np.asarray(coeffs, dtype=float).ravel()
    if coeffs.size == 0:
        raise InvalidParameterError("coefficient vector must be non-empty")
    if int(embed_dim) != embed_dim or embed_dim < 1:
        raise InvalidParameterError("embed_dim must be a positive integer")
    L = coeffs.size
    A = np.zeros((embed_dim, L + embed_dim - 1))
    for r in range(embed_dim):
        A[r, r:r + L] = coeffs
    return A


def simulate_ma_embedding(coeffs: Sequence[float], alpha: float, n: int, embed_dim: int,
                          stream: RandomStream, factor_law: str = "symmetric_stable") -> SampleMatrix:
    """Lag vectors (Y_t, ..., Y_{t-D+1}) of Y_t = sum_k coeffs[k] Z_{t-k}.

    Rows overlap in time.  The latent matrix holds, for each row, the
    innovations (Z_t, ..., Z_{t-p+1}) so that X = Z A^T with the banded
    matrix from :func:`ma_loading_matrix`.
    """
    if int(embed_dim) != embed_dim or embed_dim < 2:
        raise InvalidParameterError("embed_dim must be an integer >= 2")
    A = ma_loading_matrix(coeffs, embed_dim)
    _check_count(n)
    if factor_law not in FACTOR_LAWS:
        raise InvalidParameterError(f"factor_law must be one of {FACTOR_LAWS}")
    p = A.shape[1]
    z = _factors(stream, factor_law, alpha, "symmetric", n + p - 1)
    c = np.asarray(coeffs, dtype=float).ravel()
    L = c.size
    y = np.zeros(z.size)
    for k in range(L):
        y[k:] += c[k] * z[: z.size - k]
    # time index of row i is t_i = i + p - 1 so every lag of every innovation exists
    t = np.arange(n) + p - 1
    X = np.column_stack([y[t - r] for r in range(embed_dim)])
    Z = np.column_stack([z[t - j] for j in range(p)])
    return SampleMatrix(X=X, Z=Z, A=A, meta={"model": "ma", "alpha": alpha, "coeffs": tuple(c)})
