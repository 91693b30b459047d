"""Monte-Carlo mutual-information estimator against analytic oracles."""

import numpy as np
import pytest

from spimmwave import (
    CovarianceSet,
    MonteCarloSpec,
    ParameterError,
    asymptotic_covariances,
    conditional_symbol_rate,
    covariances,
    mc_mutual_information,
    mc_spatial_information,
    pattern_alphabet,
    total_rate_approx,
)


def test_spec_rejects_small_sample_counts():
    with pytest.raises(ParameterError):
        MonteCarloSpec(n_samples=999)
    with pytest.raises(ParameterError):
        MonteCarloSpec(batch=0)


def test_rejects_indefinite_covariance():
    from spimmwave import NotPositiveDefiniteError
    bad = np.stack([np.diag([1.0, -1.0]).astype(complex)])
    covs = CovarianceSet(n0=0.1, sigmas=bad)
    with pytest.raises(NotPositiveDefiniteError):
        mc_mutual_information(covs, MonteCarloSpec(1000, seed=0))


def test_zero_channel_rate_is_zero():
    covs = covariances(np.zeros((8, 1)), pattern_alphabet(1, 1), 0.5)
    est = mc_mutual_information(covs, MonteCarloSpec(20_000, seed=1))
    assert est.stderr < 0.05
    assert abs(est.estimate) <= 3 * est.stderr + 1e-9


def test_single_gaussian_matches_shannon_rate():
    covs = asymptotic_covariances([0.8], [64.0], [0.1], 8, 0.1)
    est = mc_mutual_information(covs, MonteCarloSpec(100_000, seed=2))
    exact = np.log2(1 + 0.8 * 64 / 0.1)
    assert est.estimate == pytest.approx(exact, abs=3 * est.stderr)
    assert est.stderr < 0.02


def test_estimator_is_deterministic():
    covs = asymptotic_covariances([0.9, 0.1], [64, 64], [-0.2, 0.2], 8, 0.1)
    spec = MonteCarloSpec(10_000, seed=7)
    assert mc_mutual_information(covs, spec) == mc_mutual_information(covs, spec)
    assert mc_mutual_information(covs, MonteCarloSpec(10_000, seed=8)) != \
        mc_mutual_information(covs, spec)


def test_spatial_information_single_pattern_is_zero():
    covs = asymptotic_covariances([0.5], [32.0], [0.0], 8, 0.2)
    est = mc_spatial_information(covs, MonteCarloSpec(20_000, seed=3))
    assert abs(est.estimate) <= 3 * est.stderr


def test_spatial_information_identical_patterns_is_zero():
    sigma = asymptotic_covariances([0.5], [32.0], [0.1], 8, 0.2).sigmas[0]
    covs = CovarianceSet(n0=0.2, sigmas=np.stack([sigma, sigma]))
    est = mc_spatial_information(covs, MonteCarloSpec(20_000, seed=4))
    assert abs(est.estimate) <= 3 * est.stderr


def test_spatial_information_saturates_at_one_bit():
    covs = asymptotic_covariances([1.0, 1.0], [64.0, 64.0], [-0.25, 0.25], 8, 1e-3)
    est = mc_spatial_information(covs, MonteCarloSpec(100_000, seed=5))
    assert est.estimate == pytest.approx(1.0, abs=0.05)


def test_spatial_information_within_alphabet_budget():
    rng = np.random.default_rng(6)
    for seed in range(5):
        w = np.sort(rng.uniform(0.1, 1.0, 2))[::-1]
        theta = rng.uniform(-0.4, 0.4, 2)
        covs = asymptotic_covariances(w, [64, 64], theta, 8, 0.1)
        est = mc_spatial_information(covs, MonteCarloSpec(20_000, seed=seed))
        assert -3 * est.stderr <= est.estimate <= 1.0 + 3 * est.stderr


def test_total_rate_sandwich():
    # conditioning bounds: symbol term <= total <= symbol term + log2 K
    rng = np.random.default_rng(9)
    for seed in range(5):
        w = np.sort(rng.uniform(0.1, 1.0, 2))[::-1]
        theta = rng.uniform(-0.4, 0.4, 2)
        covs = asymptotic_covariances(w, [64, 64], theta, 8, 0.2)
        est = mc_mutual_information(covs, MonteCarloSpec(20_000, seed=seed))
        symbol = conditional_symbol_rate(covs)
        assert est.estimate >= symbol - 3 * est.stderr
        assert est.estimate <= symbol + 1.0 + 3 * est.stderr


def test_stderr_scales_with_sample_count():
    covs = asymptotic_covariances([0.9, 0.1], [64, 64], [-0.15, 0.2], 8, 0.1)
    ratios = []
    for seed in range(6):
        small = mc_mutual_information(covs, MonteCarloSpec(20_000, seed=seed))
        large = mc_mutual_information(covs, MonteCarloSpec(40_000, seed=seed + 100))
        ratios.append(small.stderr / large.stderr)
    assert np.mean(ratios) == pytest.approx(np.sqrt(2.0), rel=0.2)


def test_agreement_with_closed_form_on_separated_draws():
    # balanced gains, beams outside each other's main lobe, snr >= 2 dB
    rng = np.random.default_rng(10)
    for snr_db in (2.0, 10.0):
        n0 = 10 ** (-snr_db / 10)
        for _ in range(5):
            theta = rng.uniform(-0.25, 0.25, 2)
            while abs(theta[0] - theta[1]) < 1 / 8:
                theta = rng.uniform(-0.25, 0.25, 2)
            covs = asymptotic_covariances([0.6, 0.4], [64, 64], theta, 8, n0)
            est = mc_mutual_information(covs, MonteCarloSpec(50_000, seed=int(snr_db)))
            assert abs(est.estimate - total_rate_approx(covs)) <= 0.15
