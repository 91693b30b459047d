"""Superiority conditions, margin search, and the crossover root solver."""

import numpy as np
import pytest

from spimmwave import (
    MarginQuery,
    NoRootError,
    ParameterError,
    decay_condition_value,
    gamma_crossover,
    geometric_mean_threshold,
    high_snr_superiority,
    spim_margin,
    two_path_margin,
)


def test_two_path_margin_values():
    assert two_path_margin(0.9, 0.1) == pytest.approx(-0.5)
    assert two_path_margin(0.6, 0.4) == pytest.approx(1.0)
    assert two_path_margin(0.8, 0.2) == 0.0


def test_two_path_margin_validation():
    with pytest.raises(ParameterError):
        two_path_margin(0.9, 0.0)
    with pytest.raises(ParameterError):
        two_path_margin(0.1, 0.9)


def test_threshold_noise_free_two_paths():
    # tau -> 1/4, i.e. the condition reduces to w2 > w1 / 4
    res = geometric_mean_threshold([0.8, 0.3], [64.0, 64.0], 0.0)
    assert res.tau == pytest.approx(0.25)
    assert res.geo_mean == pytest.approx(0.3)
    assert res.holds


def test_threshold_equal_gains_four_paths():
    res = geometric_mean_threshold([1.0, 1.0, 1.0, 1.0], [64.0] * 4, 0.0)
    assert res.tau == pytest.approx(4.0 ** (-4.0 / 3.0), rel=1e-12)
    assert res.tau == pytest.approx(0.157, abs=5e-4)
    assert res.geo_mean == pytest.approx(1.0)
    assert res.holds


def test_threshold_monotone_in_noise():
    taus = [geometric_mean_threshold([0.8, 0.2], [64.0, 64.0], n0).tau
            for n0 in (0.0, 0.1, 0.5, 1.0)]
    assert all(b > a for a, b in zip(taus, taus[1:]))


def test_threshold_validation():
    with pytest.raises(ParameterError):
        geometric_mean_threshold([0.9], [64.0], 0.1)
    with pytest.raises(ParameterError):
        geometric_mean_threshold([0.9, 0.0], [64.0, 64.0], 0.1)


def test_high_snr_check_is_noise_free_threshold():
    rng = np.random.default_rng(2)
    for _ in range(50):
        m = int(rng.integers(2, 7))
        w = np.sort(rng.uniform(0.01, 1.0, m))[::-1]
        res = geometric_mean_threshold(w, np.ones(m), 0.0)
        assert high_snr_superiority(w) == res.holds


def test_high_snr_check_logarithmic_form():
    # same verdict as (1/(M-1)) sum log w_n > log w_1 - (M/(M-1)) log M
    rng = np.random.default_rng(4)
    for _ in range(200):
        m = int(rng.integers(2, 8))
        w = np.sort(rng.uniform(0.01, 1.0, m))[::-1]
        log_lhs = np.mean(np.log(w[1:]))
        log_rhs = np.log(w[0]) - m / (m - 1.0) * np.log(m)
        assert high_snr_superiority(w) == (log_lhs > log_rhs)


def test_high_snr_boundary_tie_is_strict():
    assert not high_snr_superiority([0.8, 0.2])  # 0.2 == 0.8 / 4 exactly


def test_two_path_margin_consistent_with_high_snr_check():
    rng = np.random.default_rng(6)
    for _ in range(100):
        w2 = rng.uniform(0.01, 0.5)
        w1 = rng.uniform(w2, 1.0)
        assert (two_path_margin(w1, w2) > 0) == high_snr_superiority([w1, w2])


def test_decay_value_conventions_and_validation():
    assert decay_condition_value(1, 0.5, 0.1, 64.0) == 1.0
    with pytest.raises(ParameterError):
        decay_condition_value(2, 1.5, 0.1, 64.0)
    with pytest.raises(ParameterError):
        decay_condition_value(2, 0.5, 0.1, 0.0)
    with pytest.raises(ParameterError):
        decay_condition_value(0.5, 0.5, 0.1, 64.0)


def test_decay_value_noise_free_two_beam_boundary():
    # with m = 2 the noise-free expression is 4 * gamma, so gamma = 1/4 sits on 1
    assert decay_condition_value(2, 0.25, 0.0, 64.0) == pytest.approx(1.0, rel=1e-15)
    assert decay_condition_value(2, 0.3, 0.0, 64.0) > 1.0
    assert decay_condition_value(2, 0.2, 0.0, 64.0) < 1.0


def test_decay_value_limit_near_unit_decay():
    # gamma -> 1 with small noise approaches m^(m/(m-1))
    for m in (2, 4, 8):
        limit = m ** (m / (m - 1.0))
        assert decay_condition_value(m, 0.9999, 1e-6, 64.0) == pytest.approx(limit, rel=1e-3)


def test_decay_value_monotone_in_gamma():
    # strictly increasing once above the exp underflow floor, never decreasing
    grid = np.arange(0.05, 0.951, 0.05)
    for m in (2, 4, 8):
        values = [decay_condition_value(m, g, 0.1, 64.0) for g in grid]
        assert all(b >= a for a, b in zip(values, values[1:]))
        assert all(b > a for a, b in zip(values, values[1:]) if a > 1e-300)


def test_margin_small_decay_prefers_single_beam():
    assert spim_margin(MarginQuery(gamma=0.1, n0=0.1, g1=64.0)) == 1


def test_margin_matches_bruteforce_scan():
    for gamma, n0 in ((0.9, 0.01), (0.5, 0.1), (0.3, 0.05), (0.97, 0.2)):
        query = MarginQuery(gamma=gamma, n0=n0, g1=64.0, b_max=6)
        feasible = [2 ** b for b in range(0, 7)
                    if b == 0 or decay_condition_value(2 ** b, gamma, n0, 64.0) > 1.0]
        assert spim_margin(query) == max(feasible)
        assert spim_margin(query) in {2 ** b for b in range(7)}


def test_margin_monotone_in_gamma():
    for n0 in (0.05, 0.1, 0.5):
        margins = [spim_margin(MarginQuery(gamma=g, n0=n0, g1=64.0))
                   for g in np.arange(0.05, 0.951, 0.05)]
        assert all(b >= a for a, b in zip(margins, margins[1:]))


def test_margin_relaxed_grid():
    query = MarginQuery(gamma=0.6, n0=0.1, g1=64.0, relax_integer=True)
    relaxed = spim_margin(query)
    integral = spim_margin(MarginQuery(gamma=0.6, n0=0.1, g1=64.0))
    assert isinstance(relaxed, float)
    assert 1.0 <= relaxed <= 64.0
    assert relaxed >= integral
    # grid resolution is 0.01 in the beam count
    assert round(relaxed * 100) == pytest.approx(relaxed * 100, abs=1e-9)


def test_margin_validation():
    with pytest.raises(ParameterError):
        MarginQuery(gamma=0.0, n0=0.1, g1=64.0)
    with pytest.raises(ParameterError):
        MarginQuery(gamma=0.5, n0=-0.1, g1=64.0)


def test_crossover_reference_points():
    assert gamma_crossover(2, 0.1, 64.0) == pytest.approx(0.258, abs=0.005)
    assert gamma_crossover(4, 0.1, 64.0) == pytest.approx(0.425, abs=0.005)
    assert gamma_crossover(8, 0.1, 64.0) == pytest.approx(0.620, abs=0.005)


def test_crossover_residual_is_tiny():
    for m in (2, 4, 8):
        root = gamma_crossover(m, 0.1, 64.0)
        assert abs(decay_condition_value(m, root, 0.1, 64.0) - 1.0) <= 1e-4


def test_crossover_agrees_with_bisection_only():
    for m in (2, 4, 8):
        polished = gamma_crossover(m, 0.1, 64.0, newton_polish=True)
        plain = gamma_crossover(m, 0.1, 64.0, newton_polish=False)
        assert polished == pytest.approx(plain, abs=1e-6)


def test_crossover_no_root_detection():
    # heavy noise keeps the condition below 1 on the whole interval
    with pytest.raises(NoRootError):
        gamma_crossover(2, 50.0, 64.0)
    with pytest.raises(ParameterError):
        gamma_crossover(1, 0.1, 64.0)


def test_margin_transition_matches_crossover():
    # the margin jumps past 1 exactly where the two-beam condition crosses
    root = gamma_crossover(2, 0.1, 64.0)
    assert spim_margin(MarginQuery(gamma=root - 0.01, n0=0.1, g1=64.0)) == 1
    assert spim_margin(MarginQuery(gamma=root + 0.01, n0=0.1, g1=64.0)) >= 2
