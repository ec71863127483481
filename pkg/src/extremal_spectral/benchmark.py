"""Replicated end-to-end runs comparing spectral clustering with a spherical
k-means baseline on simulated extremes."""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from .cluster import choose_k_n, spectral_cluster
from .errors import InvalidParameterError
from .extremal import select_extremes
from .measure import (center_error, lfm_angular_measure, ma_angular_measure, matched_mass_error,
                      noisy_lfm_angular_measure)
from .numerics import spherical_kmeans
from .variates import (EXAMPLE_LOADINGS, MA3_COEFFS, FactorModelSpec, RandomStream, simulate_lfm,
                       simulate_ma_embedding)

# sample size, number of extremes and tau, paired along the ladder
DEFAULT_LADDER = ((1000, 100, 3.0), (5000, 200, 5.0), (25000, 400, 7.0), (125000, 800, 9.0))
METHODS = ("spectral", "spherical_kmeans")


@dataclass(frozen=True)
class Cell:
    model: str
    sigma: float
    n: int
    N_n: int
    tau: float


@dataclass
class ModelSetup:
    model: str = "lfm"
    A: np.ndarray = None
    alpha: float = 1.0
    coeffs: tuple = MA3_COEFFS
    embed_dim: int = 2
    m: int = 2
    s: float = 1.0
    mode: str = "symmetric"
    eigensolver: str = "lapack"

    def truth(self, sigma):
        A = EXAMPLE_LOADINGS if self.A is None else self.A
        if self.model == "ma":
            return ma_angular_measure(self.coeffs, self.alpha, self.embed_dim)
        if sigma > 0:
            return noisy_lfm_angular_measure(A, sigma, alpha=self.alpha)
        return lfm_angular_measure(A, self.alpha)

    def simulate(self, n, sigma, stream):
        if self.model == "ma":
            return simulate_ma_embedding(self.coeffs, self.alpha, n, self.embed_dim, stream)
        A = EXAMPLE_LOADINGS if self.A is None else self.A
        return simulate_lfm(FactorModelSpec(A, self.alpha, sigma), n, stream)


def _target_masses(truth):
    # clusters partition every extreme, so compare with the discrete part rescaled to one
    return truth.masses / truth.masses.sum()


def run_replication(setup: ModelSetup, cell: Cell, rep: int, seed: int) -> list:
    """One simulated sample, both methods, two result rows."""
    stream = RandomStream(seed, ("benchmark", cell.model, cell.sigma, cell.n, cell.N_n, cell.tau, rep))
    sample = setup.simulate(cell.n, cell.sigma, stream.substream("simulate"))
    extremes = select_extremes(sample, top=cell.N_n)
    k_n = choose_k_n(extremes.N_n, cell.tau)
    truth = setup.truth(cell.sigma)
    target = truth.__class__(truth.atoms, _target_masses(truth), 0.0)

    spectral = spectral_cluster(extremes, setup.m, k_n, s=setup.s, mode=setup.mode,
                                stream=stream.substream("spectral"), eigensolver=setup.eigensolver)
    base = spherical_kmeans(extremes.angles, setup.m, stream=stream.substream("baseline"))
    base_masses = np.bincount(base.labels, minlength=setup.m) / extremes.N_n

    rows = []
    for method, atoms, masses in (("spectral", spectral.atoms_hat, spectral.masses_hat),
                                  ("spherical_kmeans", base.centroids, base_masses)):
        if np.any(~np.isfinite(atoms)):
            err = mass_err = float("nan")
        else:
            err = center_error(atoms, target)
            mass_err = matched_mass_error(atoms, masses, target)
        rows.append({
            "model": cell.model, "sigma": cell.sigma, "n": cell.n, "N_n": cell.N_n, "tau": cell.tau,
            "k_n": k_n, "rep": rep, "method": method, "center_error": err, "mass_error": mass_err,
        })
    return rows


def _job(args):
    return run_replication(*args)


def run_benchmark(setup: ModelSetup, cells, reps: int, seed: int = 0, workers: int = 1) -> list:
    """Rows for every cell, replication and method, sorted canonically.

    Each replication draws from its own labelled substream, so the output does
    not depend on ``workers``.
    """
    if reps < 1:
        raise InvalidParameterError("reps must be positive")
    jobs = [(setup, cell, r, seed) for cell in cells for r in range(reps)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_job, jobs))
    else:
        chunks = [_job(j) for j in jobs]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r["model"], r["sigma"], r["n"], r["N_n"], r["tau"], r["rep"], METHODS.index(r["method"])))
    return rows


def ladder_cells(model="lfm", sigma=0.0, ladder=DEFAULT_LADDER):
    return [Cell(model, float(sigma), int(n), int(N), float(t)) for n, N, t in ladder]


def summarize(rows, key="center_error"):
    """Median of ``key`` per (cell, method)."""
    groups = {}
    for r in rows:
        groups.setdefault((r["model"], r["sigma"], r["n"], r["N_n"], r["tau"], r["method"]), []).append(r[key])
    return {k: float(np.nanmedian(v)) for k, v in groups.items()}
