import numpy as np
import pytest
from pydantic import ValidationError

from survlab.synthetic import (
    HORIZON,
    RATE_BOUND,
    SyntheticSpec,
    sample_dataset,
    true_cumulative_hazards,
    true_cumulative_incidence,
    true_hazards,
    true_survival,
    true_survival_curves,
)


def test_hazards_at_origin():
    origin = np.zeros(2)
    lam1, _ = true_hazards(0.0, origin)
    assert lam1 == pytest.approx(0.045)
    assert true_hazards(2.5, origin)[1] == pytest.approx(0.045)
    assert true_hazards(7.5, origin)[1] == pytest.approx(0.015)


def test_switch_time_keeps_only_the_baseline_factor():
    lam1, lam2 = true_hazards(5.0, np.array([3.0, -2.0]))
    assert lam1 == pytest.approx(0.03 * (1.0 + 0.5 * np.cos(np.pi)))
    assert lam2 == pytest.approx(0.03 * (1.0 + 0.5 * np.sin(np.pi)))


def test_survival_at_horizon_for_origin():
    expected = np.exp(-0.6)
    assert true_survival(10.0, np.zeros(2)) == pytest.approx(expected, abs=1e-9)
    assert true_survival_curves(np.zeros((1, 2)), [10.0])[0, 0] == pytest.approx(
        0.548812, abs=1e-6
    )
    assert true_survival(0.0, np.zeros(2)) == 1.0


def test_closed_form_matches_quadrature():
    rng = np.random.default_rng(0)
    x = rng.normal(size=(5, 2))
    times = [0.5, 4.9, 5.0, 5.1, 8.0, 10.0]
    curves = true_survival_curves(x, times)
    for i in range(5):
        for g, t in enumerate(times):
            assert curves[i, g] == pytest.approx(true_survival(t, x[i]), abs=1e-8)


def test_cumulative_incidences_sum_to_event_probability():
    x = np.array([0.4, -1.1])
    t = 7.0
    total = true_cumulative_incidence(t, x, 1) + true_cumulative_incidence(t, x, 2)
    assert total == pytest.approx(1.0 - true_survival(t, x), abs=1e-7)
    assert true_cumulative_incidence(0.0, x, 1) == 0.0


def test_rate_bound_dominates_hazards():
    rng = np.random.default_rng(1)
    x = rng.normal(scale=10.0, size=(2000, 2))
    t = rng.uniform(0.0, HORIZON, size=2000)
    lam1, lam2 = true_hazards(t, x)
    assert np.all(lam1 <= RATE_BOUND)
    assert np.all(lam2 <= RATE_BOUND)
    cum1, cum2 = true_cumulative_hazards(t, x)
    assert np.all(cum1 >= 0.0) and np.all(cum2 >= 0.0)


def test_sample_bounds_and_labels():
    data = sample_dataset(SyntheticSpec(n=3000, seed=2))
    assert len(data) == 3000
    assert np.all((data.time >= 0.0) & (data.time <= HORIZON))
    assert set(np.unique(data.event)) <= {0, 1}
    assert set(np.unique(data.event_type)) <= {0, 1, 2}
    # administrative censoring lands exactly on the horizon
    np.testing.assert_array_equal(data.time[data.event == 0], HORIZON)
    assert data.covariates.numeric.shape == (3000, 2)


def test_sample_is_deterministic_per_seed():
    a = sample_dataset(SyntheticSpec(n=500, seed=11))
    b = sample_dataset(SyntheticSpec(n=500, seed=11))
    c = sample_dataset(SyntheticSpec(n=500, seed=12))
    np.testing.assert_array_equal(a.time, b.time)
    np.testing.assert_array_equal(a.event_type, b.event_type)
    assert not np.array_equal(a.time, c.time)


def test_empty_sample():
    data = sample_dataset(SyntheticSpec(n=0, seed=0))
    assert len(data) == 0


def test_uniform_censoring_adds_early_censoring():
    data = sample_dataset(SyntheticSpec(n=2000, seed=3, censoring="uniform"))
    censored = data.time[data.event == 0]
    assert np.any(censored < HORIZON)
    assert np.all(censored <= HORIZON)


def test_spec_is_strict():
    with pytest.raises(ValidationError):
        SyntheticSpec(n=-1)
    with pytest.raises(ValidationError):
        SyntheticSpec(censoring="random")


def test_empirical_survival_matches_truth():
    n = 20_000
    data = sample_dataset(SyntheticSpec(n=n, seed=5))
    empirical = float(np.mean(data.time > 5.0))
    truth = float(true_survival_curves(data.covariates.numeric, [5.0]).mean())
    se = np.sqrt(truth * (1.0 - truth) / n)
    assert abs(empirical - truth) <= 3.0 * se
