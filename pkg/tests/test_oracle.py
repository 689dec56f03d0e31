import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import stats

import hardedge.oracle as oracle_mod
from exact_bessel import count_law
from hardedge.errors import DomainError, EigensolverError
from hardedge.noise import NoiseDriver
from hardedge.oracle import (BidiagonalEnsemble, oracle_count, oracle_counts, sample_beta_laguerre,
                             smallest_eigenvalues)
from hardedge.sde import ModelParams


def test_ensemble_shape_validation():
    with pytest.raises(DomainError):
        BidiagonalEnsemble(3, 3.0, 2.0, [1, 2], [1, 1])
    with pytest.raises(DomainError):
        BidiagonalEnsemble(2, 2.0, 2.0, [1, -2], [1])


def test_diagonal_matrix_spectrum():
    ens = BidiagonalEnsemble(4, 4.0, 2.0, [3.0, 1.0, 4.0, 2.0], [0.0, 0.0, 0.0])
    out = smallest_eigenvalues(ens, 4)
    np.testing.assert_allclose(out.eigenvalues, np.array([1, 4, 9, 16]) / 2.0, rtol=1e-12)
    np.testing.assert_allclose(out.scaled_points, np.sqrt(4 * out.eigenvalues))


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 60), st.floats(-0.9, 5), st.sampled_from([1.0, 2.0, 4.0, 0.7]), st.integers(0, 2 ** 31))
def test_bisection_matches_dense_eigensolver(n, a, beta, seed):
    ens = sample_beta_laguerre(n, a, beta, NoiseDriver(seed))
    b = ens.dense()
    ref = np.sort(np.linalg.svd(b, compute_uv=False)) ** 2 / beta
    k = min(n, 5)
    got = smallest_eigenvalues(ens, k).eigenvalues
    np.testing.assert_allclose(got, ref[:k], rtol=1e-9, atol=1e-300)


def test_small_singular_values_relative_accuracy():
    # a graded bidiagonal whose smallest singular value is tiny
    d = np.array([1e-8, 1.0, 1.0])
    s = np.array([1.0, 1.0])
    ens = BidiagonalEnsemble(3, 3.0, 1.0, d, s)
    got = smallest_eigenvalues(ens, 1).eigenvalues[0]
    # product of singular values equals |det B| = prod(d)
    sv = np.linalg.svd(ens.dense(), compute_uv=False)
    assert got == pytest.approx(sv.min() ** 2, rel=1e-8)
    assert math.sqrt(got) * np.prod(sorted(sv)[1:]) == pytest.approx(1e-8, rel=1e-8)


def test_k_out_of_range():
    ens = sample_beta_laguerre(5, 0.0, 2.0, NoiseDriver(1))
    with pytest.raises(DomainError):
        smallest_eigenvalues(ens, 0)
    with pytest.raises(DomainError):
        smallest_eigenvalues(ens, 6)


@pytest.mark.parametrize("kw", [dict(n=0, a=0, beta=2), dict(n=5, a=-1, beta=2), dict(n=5, a=0, beta=0)])
def test_sampler_domain(kw):
    with pytest.raises(DomainError):
        sample_beta_laguerre(noise=NoiseDriver(0), **kw)


def test_chi_entry_moments():
    n, a, beta = 6, 0.5, 1.5
    d = np.array([sample_beta_laguerre(n, a, beta, NoiseDriver(3, i)).diagonal for i in range(4000)])
    s = np.array([sample_beta_laguerre(n, a, beta, NoiseDriver(3, i)).subdiagonal for i in range(4000)])
    i = np.arange(1, n + 1)
    dof_d = beta * (n + a - i + 1)
    dof_s = beta * (n - i[:-1])
    np.testing.assert_allclose((d ** 2).mean(axis=0), dof_d, rtol=0.08)
    np.testing.assert_allclose((s ** 2).mean(axis=0), dof_s, rtol=0.08)


def test_corner_shared_across_sizes():
    small = sample_beta_laguerre(5, 0.3, 2.0, NoiseDriver(7, 1))
    big = sample_beta_laguerre(9, 0.3, 2.0, NoiseDriver(7, 1))
    np.testing.assert_array_equal(small.diagonal, big.diagonal[-5:])
    np.testing.assert_array_equal(small.subdiagonal, big.subdiagonal[-4:])


def test_one_by_one_mean():
    # n = 1: the single eigenvalue is chi^2_{beta (a + 1)} / beta with mean a + 1
    vals = [smallest_eigenvalues(sample_beta_laguerre(1, 1.5, 2.0, NoiseDriver(9, i)), 1).eigenvalues[0]
            for i in range(4000)]
    assert np.mean(vals) == pytest.approx(2.5, abs=4 * math.sqrt(2.5 / 4000) + 0.01)


@pytest.mark.parametrize("beta,a", [(1.0, 2), (2.0, 0)])
def test_smallest_eigenvalue_matches_dense_wishart(beta, a):
    n, reps = 5, 3000
    rng = np.random.default_rng(42)
    ref = []
    for _ in range(reps):
        g = rng.standard_normal((n, n + a))
        if beta == 2.0:
            g = g + 1j * rng.standard_normal((n, n + a))
        ref.append(np.linalg.eigvalsh(g @ g.conj().T / beta)[0])
    got = [smallest_eigenvalues(sample_beta_laguerre(n, a, beta, NoiseDriver(5, i)), 1).eigenvalues[0]
           for i in range(reps)]
    assert stats.ks_2samp(ref, got).pvalue > 1e-3


def test_bisection_failure_reports_intervals(monkeypatch):
    monkeypatch.setattr(oracle_mod, "_MAX_BISECT", 3)
    ens = sample_beta_laguerre(10, 0.0, 2.0, NoiseDriver(1))
    with pytest.raises(EigensolverError) as info:
        smallest_eigenvalues(ens, 2)
    assert len(info.value.intervals) == 2


def test_count_zero_lambda_and_warning():
    s = oracle_count(100, ModelParams(2.0, 0.0, 0.0), NoiseDriver(2))
    assert s.value == 0 and not s.warnings
    s = oracle_count(100, ModelParams(2.0, 0.0, 3.0), NoiseDriver(2))
    assert s.warnings and s.provenance == "matrix_oracle"


def test_count_agrees_with_eigenvalues():
    n = 200
    for i in range(5):
        noise = NoiseDriver(11, i)
        out = smallest_eigenvalues(sample_beta_laguerre(n, 0.5, 1.0, noise), 10)
        s = oracle_count(n, ModelParams(1.0, 0.5, 3.0), noise)
        assert s.value == int(np.sum(out.scaled_points <= 3.0))


def test_batch_matches_single():
    batch = oracle_counts(120, 2.0, 0.0, [1.0, 2.0], 6, 13)
    for j in range(6):
        assert oracle_count(120, ModelParams(2.0, 0.0, 2.0), NoiseDriver(13, j)).value == batch[1, j]
    assert np.all(batch[1] >= batch[0])


def test_oracle_matches_exact_law_beta2():
    counts = oracle_counts(400, 2.0, 0.0, [3.0], 2000, 17)[0]
    p = count_law(3.0)
    obs = np.bincount(np.clip(counts, 1, 3), minlength=4)[1:]
    exp = 2000 * np.array([p[0] + p[1], p[2], 1 - p[0] - p[1] - p[2]])
    assert stats.chisquare(obs, exp).pvalue > 1e-3


def test_oracle_size_insensitive_above_guideline():
    a = oracle_counts(400, 1.0, 0.5, [2.0], 1500, 19)[0]
    b = oracle_counts(800, 1.0, 0.5, [2.0], 1500, 19, first_index=10_000)[0]
    assert stats.ks_2samp(a, b).pvalue > 1e-3


@pytest.mark.parametrize("beta", [1.0, 2.0])
def test_eigenvalue_sum_matches_dense_wishart(beta):
    n, reps = 6, 10_000
    rng = np.random.default_rng(int(beta))
    ref = np.empty(reps)
    for r in range(reps):
        g = rng.standard_normal((n, n))
        if beta == 2.0:
            g = g + 1j * rng.standard_normal((n, n))
        ref[r] = np.linalg.eigvalsh(g @ g.conj().T / beta).sum()
    got = np.empty(reps)
    for r in range(reps):
        ens = sample_beta_laguerre(n, 0.0, beta, NoiseDriver(23, r))
        got[r] = smallest_eigenvalues(ens, n).eigenvalues.sum()
    se = math.sqrt(ref.var(ddof=1) / reps + got.var(ddof=1) / reps)
    assert abs(got.mean() - ref.mean()) < 3 * se
