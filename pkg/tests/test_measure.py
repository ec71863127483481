import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from extremal_spectral.errors import InvalidParameterError, MissingLatentsError
from extremal_spectral.measure import (center_error, coordinate_ks, empirical_deviation_sample, ess,
                                       expected_gaussian_norm, linear_constraint_residual, lfm_angular_measure,
                                       ma_angular_measure, ma_loading_matrix, matched_mass_error,
                                       noisy_lfm_angular_measure, snr, theorem1_limit_sampler)
from extremal_spectral.variates import (EXAMPLE_LOADINGS, MA3_COEFFS, FactorModelSpec, RandomStream, SampleMatrix,
                                        simulate_lfm)
from oracles import brute_force_matching

COL1 = math.sqrt(0.01 + 0.04 + 0.09 + 0.16)
COL2 = math.sqrt(0.81 + 0.64 + 0.49 + 0.36)


def test_identity_measure():
    m = lfm_angular_measure(np.eye(2), 1.0)
    assert np.array_equal(m.atoms, np.eye(2)) and np.allclose(m.masses, [0.5, 0.5])


def test_example_masses():
    m = lfm_angular_measure(EXAMPLE_LOADINGS, 1.0)
    w = COL1 + COL2
    assert np.allclose(m.masses, [COL1 / w, COL2 / w], atol=1e-15)
    assert m.masses == pytest.approx([0.2653, 0.7347], abs=5e-5)
    assert m.total_mass() == pytest.approx(1.0, abs=1e-12)


def test_symmetric_case_splits_mass():
    m = lfm_angular_measure(np.eye(2), 1.0, "symmetric")
    assert m.K == 4 and np.allclose(m.masses, 0.25)
    assert np.allclose(m.atoms[1], -m.atoms[0])


def test_parallel_columns_merge():
    m = lfm_angular_measure(np.array([[1.0, 2.0], [1.0, 2.0]]), 1.0)
    assert m.K == 1 and m.masses[0] == pytest.approx(1.0)


@pytest.mark.parametrize("d,value", [(1, math.sqrt(2 / math.pi)), (2, math.sqrt(math.pi / 2)),
                                     (4, 3 * math.sqrt(2 * math.pi) / 4)])
def test_gaussian_norm_closed_forms(d, value):
    assert expected_gaussian_norm(d) == pytest.approx(value, rel=1e-14)


def test_gaussian_norm_known_constant():
    assert round(expected_gaussian_norm(4), 3) == 1.880


def test_noisy_measure():
    m0 = noisy_lfm_angular_measure(EXAMPLE_LOADINGS, 0.0)
    ref = lfm_angular_measure(EXAMPLE_LOADINGS, 1.0)
    assert np.allclose(m0.masses, ref.masses) and m0.continuous_mass == 0.0
    m1 = noisy_lfm_angular_measure(EXAMPLE_LOADINGS, 1.0)
    assert m1.continuous_mass == pytest.approx(1.880 / (2.065 + 1.880), abs=5e-4)
    assert m1.total_mass() == pytest.approx(1.0, abs=1e-12)
    with pytest.raises(InvalidParameterError):
        noisy_lfm_angular_measure(EXAMPLE_LOADINGS, 1.0, alpha=2.0)


def test_ma_atoms_listed_pairs():
    m = ma_angular_measure(MA3_COEFFS, 1.8, 2)
    listed = [(1, 0), (0.5 / math.sqrt(1.25), 1 / math.sqrt(1.25)), (-0.6 / math.sqrt(0.61), 0.5 / math.sqrt(0.61)),
              (1.5 / math.sqrt(2.61), -0.6 / math.sqrt(2.61)), (0, 1)]
    truth = np.array([s * np.array(c) for c in listed for s in (1, -1)])
    assert m.K == 10
    assert center_error(m, truth) < 1e-12


def test_ma_pure_noise_measure():
    m = ma_angular_measure((1.0,), 1.3, 2)
    assert m.K == 4 and np.allclose(m.masses, 0.25)


@settings(max_examples=30, deadline=None)
@given(coeffs=st.lists(st.floats(-3, 3).filter(lambda x: abs(x) > 0.05), min_size=1, max_size=4),
       D=st.integers(2, 3))
def test_ma_atom_count(coeffs, D):
    A = ma_loading_matrix(coeffs, D)
    cols = A / np.linalg.norm(A, axis=0)
    parallel = any(abs(abs(cols[:, i] @ cols[:, j]) - 1) < 1e-9
                   for i, j in itertools.combinations(range(A.shape[1]), 2))
    m = ma_angular_measure(coeffs, 1.5, D)
    if not parallel:
        assert m.K == 2 * (len(coeffs) + D - 1)
    assert m.total_mass() == pytest.approx(1.0, abs=1e-12)


def test_limit_sampler_single_factor_is_zero():
    out = theorem1_limit_sampler(np.array([[1.0], [2.0]]), 1.0, 0, "frechet", 5, RandomStream(0))
    assert np.array_equal(out, np.zeros((5, 2)))


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10**6), j=st.integers(0, 1))
def test_limit_sampler_linear_constraint(seed, j):
    D = theorem1_limit_sampler(EXAMPLE_LOADINGS, 1.0, j, "frechet", 2000, RandomStream(seed))
    assert np.max(linear_constraint_residual(EXAMPLE_LOADINGS, j, D)) <= 1e-10


def test_limit_sampler_rejects_bad_index():
    with pytest.raises(InvalidParameterError):
        theorem1_limit_sampler(EXAMPLE_LOADINGS, 1.0, 2, "frechet", 5, RandomStream(0))


def test_deviation_sample_guards():
    s = simulate_lfm(FactorModelSpec(EXAMPLE_LOADINGS), 100, RandomStream(0))
    with pytest.raises(InvalidParameterError):
        empirical_deviation_sample(s, EXAMPLE_LOADINGS, 1.0, 0.0, 0)
    with pytest.raises(MissingLatentsError):
        empirical_deviation_sample(SampleMatrix(X=s.X), EXAMPLE_LOADINGS, 1.0, 1.0, 0)


def test_deviation_single_factor_is_zero():
    A = np.array([[1.0], [2.0]])
    s = simulate_lfm(FactorModelSpec(A), 1000, RandomStream(1))
    D = empirical_deviation_sample(s, A, 1.0, 10.0, 0)
    assert D.shape[0] > 0 and np.max(np.abs(D)) < 1e-12


def test_qualifying_counts_proportional_to_norms():
    s = simulate_lfm(FactorModelSpec(EXAMPLE_LOADINGS), 10**6, RandomStream(2))
    u = 1000.0
    counts = [empirical_deviation_sample(s, EXAMPLE_LOADINGS, 1.0, u, j).shape[0] for j in (0, 1)]
    assert counts[1] / counts[0] == pytest.approx(COL2 / COL1, rel=0.15)


def test_deviations_approach_limit_law():
    A = EXAMPLE_LOADINGS
    limit = theorem1_limit_sampler(A, 1.0, 1, "frechet", 10**4, RandomStream(3))
    ks = []
    for n in (10**4, 10**6):
        s = simulate_lfm(FactorModelSpec(A), n, RandomStream(4, (n,)))
        ks.append(coordinate_ks(empirical_deviation_sample(s, A, 1.0, math.sqrt(n), 1), limit).max())
    assert ks[1] < ks[0] and ks[1] < 0.1


def test_coordinate_ks():
    a = np.zeros((10, 2))
    assert np.array_equal(coordinate_ks(a, a), [0.0, 0.0])
    assert np.all(np.isnan(coordinate_ks(np.zeros((0, 2)), a)))


def test_snr_and_ess():
    assert snr(EXAMPLE_LOADINGS, 0.0) == 1.0
    assert ess(snr(EXAMPLE_LOADINGS, 1.0, decimals=3), 100) == 52
    assert ess(snr(EXAMPLE_LOADINGS, 3.0, decimals=3), 800) == 214
    assert ess(0.5, 3) == 2


def test_center_error_basics():
    T = lfm_angular_measure(EXAMPLE_LOADINGS, 1.0)
    assert center_error(T, T) == 0.0
    assert center_error(np.array([[1.0, 0.0]]), np.array([[0.0, 1.0]])) == pytest.approx(math.sqrt(2))


def test_center_error_brute_force():
    rng = np.random.default_rng(5)
    T = rng.standard_normal((5, 3))
    E = T[rng.permutation(5)] + 0.1 * rng.standard_normal((5, 3))
    assert center_error(E, T) == pytest.approx(brute_force_matching(E, T), rel=1e-12)


def test_truncated_center_error_and_masses():
    T = lfm_angular_measure(np.eye(2), 1.0)
    E = np.array([[0.0, 1.0], [0.6, 0.8], [1.0, 0.0]])
    assert center_error(E, T, truncate=True) == 0.0
    assert matched_mass_error(E, np.array([0.4, 0.2, 0.4]), T, truncate=True) == pytest.approx(0.1)
